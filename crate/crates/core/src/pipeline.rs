//! End-to-end pipelines and deterministic reports: build a graph algebra
//! and its certificates, classify its self-maps, and realize a finite
//! group through the whole chain group -> graph -> algebra ->
//! equivalence group, with every intermediate artifact hashed.

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::budget::Budgets;
use crate::classify::{classify_endos, equivalence_group, Classification, EndoKind};
use crate::elliptic::{ellipticity_certificate_mg, verify_pure_witness_identities, EllipticityCertificate};
use crate::error::Error;
use crate::frucht::frucht_graph;
use crate::graph::{automorphism_group, Graph};
use crate::mg::{build_mg, formal_dimension, MGAlgebra};
use crate::perm::{groups_isomorphic, Perm, PermGroup};
use crate::ring::{show_q, Q};
use crate::serial::algebra_to_json;
use crate::tilde::{degree_certificates, is_inflexible, DegreeCertificate};
use crate::Result;

fn sha256_hex(data: &str) -> String {
    let mut h = Sha256::new();
    h.update(data.as_bytes());
    hex_string(&h.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BudgetsDoc {
    pub monomial_cap: usize,
    pub groebner_pairs: usize,
    pub split_depth: usize,
    pub vertex_cap: usize,
    pub group_order_cap: usize,
}

impl From<&Budgets> for BudgetsDoc {
    fn from(b: &Budgets) -> Self {
        BudgetsDoc {
            monomial_cap: b.monomial_cap,
            groebner_pairs: b.groebner_pairs,
            split_depth: b.split_depth,
            vertex_cap: b.vertex_cap,
            group_order_cap: b.group_order_cap,
        }
    }
}

/// Output of the `build` pipeline: the algebra document plus the
/// ellipticity certificate.
pub struct BuildOutput {
    pub mg: MGAlgebra,
    pub certificate: EllipticityCertificate,
    pub formal_dimension: i64,
    pub algebra_json: String,
    pub certificate_json: String,
}

pub fn build_pipeline(graph: &Graph, u1: Q, u2: Q, budgets: &Budgets) -> Result<BuildOutput> {
    let mg = build_mg(graph, u1, u2)?;
    let certificate = ellipticity_certificate_mg(&mg, budgets)?;
    if !verify_pure_witness_identities(&mg)? {
        return Err(Error::internal("pure witness identities failed"));
    }
    let fd = formal_dimension(mg.algebra())?;
    let algebra_json = algebra_to_json(mg.algebra());
    let dim40 = mg.algebra().basis_of_degree(40, budgets)?.len();
    let cert_doc = json!({
        "elliptic": certificate.elliptic,
        "formal_dimension": fd,
        "witnesses": certificate.witnesses,
        "groebner_leading_terms": certificate.groebner_leading_terms,
        "nilpotence_exponents": certificate.nilpotence_exponents,
        "pure_ideal_generators": certificate.pure_ideal_generators,
        "dim_degree_40": dim40,
        "variant": [show_q(&mg.variant().0), show_q(&mg.variant().1)],
        "budgets": BudgetsDoc::from(budgets),
    });
    let certificate_json = serde_json::to_string_pretty(&cert_doc).expect("serializable");
    Ok(BuildOutput { mg, certificate, formal_dimension: fd, algebra_json, certificate_json })
}

/// Everything the `endos` pipeline produces.
pub struct EndosOutput {
    pub classification: Classification,
    pub group_order: usize,
    pub inflexible: bool,
    pub degrees: Vec<DegreeCertificate>,
    pub report_json: String,
}

pub fn endos_pipeline(
    graph: &Graph,
    u1: Q,
    u2: Q,
    budgets: &Budgets,
    trace: bool,
) -> Result<EndosOutput> {
    let mg = build_mg(graph, u1, u2)?;
    let elliptic = ellipticity_certificate_mg(&mg, budgets)?;
    let classification = classify_endos(&mg, budgets)?;
    let equiv = equivalence_group(&classification, budgets)?;
    let degrees = degree_certificates(&classification, &elliptic, budgets)?;
    let inflexible = is_inflexible(&degrees);
    let report_json = classification_report(
        &classification,
        &equiv.group,
        Some(&equiv.iso_to_graph_aut.map),
        &degrees,
        inflexible,
        budgets,
        trace,
    )?;
    Ok(EndosOutput {
        group_order: equiv.group.order(),
        classification,
        inflexible,
        degrees,
        report_json,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn classification_report(
    classification: &Classification,
    equiv_group: &PermGroup,
    iso_witness: Option<&[usize]>,
    degrees: &[DegreeCertificate],
    inflexible: bool,
    budgets: &Budgets,
    trace: bool,
) -> Result<String> {
    let mg = &classification.mg;
    let mut automorphism_classes = Vec::new();
    let mut constant_classes = Vec::new();
    let mut matching_classes = Vec::new();
    for class in &classification.classes {
        match &class.kind {
            EndoKind::Automorphism { perm } => automorphism_classes.push(perm.to_cycles()),
            EndoKind::Constant { s } => constant_classes.push(format!("f{s}")),
            EndoKind::MatchingProjection { support } => {
                let desc: Vec<serde_json::Value> = support
                    .iter()
                    .map(|(v, c1, c2)| {
                        json!({
                            "vertex": mg.graph().label(*v),
                            "x1_coefficient": show_q(c1),
                            "x2_coefficient": show_q(c2),
                        })
                    })
                    .collect();
                matching_classes.push(json!(desc));
            }
        }
    }
    let degree_map: std::collections::BTreeMap<String, u8> =
        degrees.iter().map(|d| (d.class_name.clone(), d.tilde_degree)).collect();
    let mut report = json!({
        "graph": mg.graph().to_text(),
        "variant": [show_q(&mg.variant().0), show_q(&mg.variant().1)],
        "class_count": classification.class_count(),
        "automorphism_classes": automorphism_classes,
        "constant_classes": constant_classes,
        "matching_classes": matching_classes,
        "group_order": equiv_group.order(),
        "iso_witness": iso_witness,
        "inflexible": inflexible,
        "degrees": degree_map,
        "exact_freedom_parameters": classification.classes.first().map(|c| c.exact_freedom.len()),
        "case_tree_stats": {
            "nodes": classification.tree.stats.nodes,
            "splits": classification.tree.stats.splits,
            "max_depth": classification.tree.stats.max_depth,
            "verified_nodes": classification.verified_nodes,
        },
        "budgets": BudgetsDoc::from(budgets),
    });
    if trace {
        let names = |v: u32| classification.ansatz.unknowns.name(v).to_string();
        report["case_tree"] = classification.tree.to_json(&names);
    }
    Ok(serde_json::to_string_pretty(&report).expect("serializable"))
}

/// The full realization chain for a finite group.
pub struct RealizeOutput {
    pub graph: Graph,
    pub classification: Classification,
    pub equiv_order: usize,
    pub inflexible: bool,
    pub report_json: String,
}

pub fn realize_pipeline(
    group: &PermGroup,
    generators: Option<Vec<Perm>>,
    u1: Q,
    u2: Q,
    budgets: &Budgets,
    trace: bool,
) -> Result<RealizeOutput> {
    // Stage 1: group -> graph, self-checked.
    let graph = frucht_graph(group, generators, budgets)?;
    let graph_text = graph.to_text();
    // An automorphism check on the produced graph may need more vertices
    // than the user-facing cap.
    let wide = Budgets { vertex_cap: budgets.vertex_cap.max(graph.n()), ..budgets.clone() };
    let aut = automorphism_group(&graph, &wide)?;
    let iso_group_aut = groups_isomorphic(group, &aut, &wide)?
        .ok_or_else(|| Error::internal("realized graph lost the group"))?;

    // Stage 2: graph -> algebra.
    let mg = build_mg(&graph, u1, u2)?;
    let elliptic = ellipticity_certificate_mg(&mg, &wide)?;
    let algebra_json = algebra_to_json(mg.algebra());

    // Stage 3: classification and the equivalence group.
    let classification = classify_endos(&mg, &wide)?;
    let equiv = equivalence_group(&classification, &wide)?;
    let iso_aut_equiv = groups_isomorphic(&aut, &equiv.group, &wide)?
        .ok_or_else(|| Error::internal("equivalence group does not match Aut"))?;

    // Stage 4: inflexibility of the extension.
    let degrees = degree_certificates(&classification, &elliptic, &wide)?;
    let inflexible = is_inflexible(&degrees);

    let class_report = classification_report(
        &classification,
        &equiv.group,
        Some(&equiv.iso_to_graph_aut.map),
        &degrees,
        inflexible,
        budgets,
        trace,
    )?;

    let report = json!({
        "group_order": group.order(),
        "graph_vertices": graph.n(),
        "graph_hash": sha256_hex(&graph_text),
        "algebra_hash": sha256_hex(&algebra_json),
        "classification_hash": sha256_hex(&class_report),
        "formal_dimension": formal_dimension(mg.algebra())?,
        "elliptic": elliptic.elliptic,
        "aut_order": aut.order(),
        "iso_group_to_aut": iso_group_aut.map,
        "equivalence_order": equiv.group.order(),
        "iso_aut_to_equivalence": iso_aut_equiv.map,
        "class_count": classification.class_count(),
        "inflexible": inflexible,
        "chain_verified": true,
        "budgets": BudgetsDoc::from(budgets),
        "classification": serde_json::from_str::<serde_json::Value>(&class_report)?,
    });
    let report_json = serde_json::to_string_pretty(&report).expect("serializable");
    Ok(RealizeOutput {
        graph,
        equiv_order: equiv.group.order(),
        classification,
        inflexible,
        report_json,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::ring::qi;

    #[test]
    fn build_pipeline_p2() {
        let g = parse_graph("a b\n").unwrap();
        let out = build_pipeline(&g, qi(0), qi(1), &Budgets::default()).unwrap();
        assert!(out.certificate.elliptic);
        assert_eq!(out.formal_dimension, 368);
        // Deterministic output.
        let out2 = build_pipeline(&g, qi(0), qi(1), &Budgets::default()).unwrap();
        assert_eq!(out.algebra_json, out2.algebra_json);
        assert_eq!(out.certificate_json, out2.certificate_json);
    }

    #[test]
    fn realize_z2() {
        let b = Budgets::default();
        let z2 = PermGroup::generate(2, &[Perm::from_cycles("(1 2)", 2).unwrap()], &b).unwrap();
        let out = realize_pipeline(&z2, None, qi(0), qi(1), &b, false).unwrap();
        assert_eq!(out.equiv_order, 2);
        assert!(out.inflexible);
    }
}
