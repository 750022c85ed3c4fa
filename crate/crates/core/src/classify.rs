//! Complete classification of the self-maps of a graph algebra up to
//! homotopy: solve the generic constraint system, turn each case-tree
//! leaf into a verified representative morphism, and assemble the group
//! of self-equivalence classes.
//!
//! Homotopy for this family is detected by exactness of the difference on
//! the degree-119 generators: maps agreeing on every other generator are
//! homotopic exactly when those differences are boundaries (there is
//! nothing in degree 39, so images of the degree-40 generators are
//! homotopy-rigid, and the only slack a cylinder homotopy can produce on
//! z-type generators is an exact term).

use std::collections::BTreeSet;
use std::sync::Arc;

use num::{One, Zero};
use rand::Rng;

use crate::ansatz::{generic_ansatz, GenericMorphism};
use crate::budget::Budgets;
use crate::constraints::{constraint_system, ConstraintSystem};
use crate::element::Element;
use crate::error::Error;
use crate::graph::automorphism_group;
use crate::homology::BoundarySolver;
use crate::mg::{MGAlgebra, DEG_Z};
use crate::monomial::Monomial;
use crate::morphism::Morphism;
use crate::mpoly::MPoly;
use crate::perm::{groups_isomorphic, GroupIso, Perm, PermGroup};
use crate::ring::Q;
use crate::solver::{solve_cases, verify_case_tree, CaseTree};
use crate::Result;

/// What a homotopy class of self-maps looks like.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndoKind {
    /// Induced by a graph automorphism (permutation over graph vertex
    /// indices).
    Automorphism { perm: Perm },
    /// The constant-type map f_s, s in {0, 1}.
    Constant { s: u8 },
    /// Identity on the core block, and each x[v] sent to a combination
    /// of x1^5 and x2^4 supported on an induced matching of the graph.
    /// Not an equivalence; not of the two classical shapes.
    MatchingProjection {
        /// (vertex index, coefficient of x1^5, coefficient of x2^4),
        /// for the vertices with nonzero image.
        support: Vec<(usize, Q, Q)>,
    },
}

impl EndoKind {
    /// Stable display name used in reports.
    pub fn name(&self, mg: &MGAlgebra) -> String {
        match self {
            EndoKind::Automorphism { perm } => {
                if perm.is_identity() {
                    "id".to_string()
                } else {
                    format!("sigma{}", perm.to_cycles())
                }
            }
            EndoKind::Constant { s } => format!("f{}", s),
            EndoKind::MatchingProjection { support } => {
                let labels: Vec<&str> =
                    support.iter().map(|&(v, _, _)| mg.graph().label(v)).collect();
                format!("proj{{{}}}", labels.join(","))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct EndoClass {
    pub kind: EndoKind,
    pub representative: Morphism,
    /// Names of the free template coefficients: the exact perturbations
    /// allowed on the z-type images.
    pub exact_freedom: Vec<String>,
}

#[derive(Debug)]
pub struct Classification {
    pub mg: MGAlgebra,
    pub classes: Vec<EndoClass>,
    pub tree: CaseTree,
    pub ansatz: GenericMorphism,
    pub system: ConstraintSystem,
    /// Case-tree nodes that passed local soundness verification.
    pub verified_nodes: usize,
}

impl Classification {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn automorphism_classes(&self) -> Vec<usize> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| matches!(c.kind, EndoKind::Automorphism { .. }))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn find_kind(&self, kind: &EndoKind) -> Option<usize> {
        self.classes.iter().position(|c| c.kind == *kind)
    }
}

/// Run the whole pipeline: ansatz, constraints, case-tree solve, local
/// soundness verification, and leaf-to-class extraction. Every
/// representative is checked to commute with the differentials; a
/// truncated tree refuses classification.
pub fn classify_endos(mg: &MGAlgebra, budgets: &Budgets) -> Result<Classification> {
    let ansatz = generic_ansatz(mg, budgets)?;
    let system = constraint_system(mg, &ansatz)?;
    let tree = solve_cases(&system, budgets);
    if !tree.complete {
        return Err(Error::resource(
            "case splits (classification refused on a partial tree)",
            budgets.split_depth,
        ));
    }
    let verified_nodes = verify_case_tree(&system, &tree)?;

    let mut classes: Vec<EndoClass> = Vec::new();
    for leaf in tree.leaves() {
        if !leaf.nonzero_free.is_empty() {
            return Err(Error::ClassificationMismatch(
                "leaf carries a nonzero constraint on a free parameter".into(),
            ));
        }
        let class = leaf_to_class(mg, &ansatz, leaf)?;
        if !class.representative.is_dga_morphism()? {
            return Err(Error::internal("leaf representative fails d-commutation"));
        }
        if classes.iter().any(|c| c.kind == class.kind) {
            return Err(Error::internal("duplicate class from disjoint leaves"));
        }
        classes.push(class);
    }
    // Canonical order: automorphisms (identity first), then constants,
    // then projections; stable by name.
    classes.sort_by_key(|c| {
        let rank = match &c.kind {
            EndoKind::Automorphism { perm } if perm.is_identity() => 0,
            EndoKind::Automorphism { .. } => 1,
            EndoKind::Constant { s } => 2 + *s as usize,
            EndoKind::MatchingProjection { .. } => 4,
        };
        (rank, c.kind.name(mg))
    });
    Ok(Classification { mg: mg.clone(), classes, tree, ansatz, system, verified_nodes })
}

fn leaf_to_class(
    mg: &MGAlgebra,
    ansatz: &GenericMorphism,
    leaf: &crate::solver::LeafSolution,
) -> Result<EndoClass> {
    let alg = mg.algebra();
    let sig = alg.sig();
    // Representative: assigned unknowns take their values with all free
    // parameters set to zero; untouched unknowns are free (zero).
    let mut values: Vec<Q> = vec![Q::zero(); ansatz.unknowns.len()];
    for (var, value) in &leaf.assignments {
        let mut v = value.clone();
        for f in value.variables() {
            v = v.substitute(f, &MPoly::zero());
        }
        let c = if v.is_empty() {
            Q::zero()
        } else {
            v.as_constant()
                .cloned()
                .ok_or_else(|| Error::internal("leaf assignment not constant after zeroing"))?
        };
        values[*var as usize] = c;
    }
    let assigned: BTreeSet<u32> = leaf.assignments.iter().map(|&(v, _)| v).collect();
    let exact_freedom: Vec<String> = (0..ansatz.unknowns.len() as u32)
        .filter(|v| !assigned.contains(v))
        .map(|v| ansatz.unknowns.name(v).to_string())
        .collect();

    let images: Vec<Element<Q>> = ansatz
        .templates
        .iter()
        .map(|tpl| {
            tpl.map_coefficients(|p| {
                let mut acc = Q::zero();
                // Each template coefficient is a single unknown.
                for (m, c) in p.terms() {
                    if let Some((v, 1)) = m.single_variable() {
                        acc += c * &values[v as usize];
                    }
                }
                acc
            })
        })
        .collect();
    let representative = Morphism::new(Arc::clone(alg), Arc::clone(alg), images)?;

    // Shape detection.
    let s_elem = representative.image_of(mg.x1);
    let x1_gen = alg.generator(mg.x1);
    let s = if s_elem.is_zero() {
        Q::zero()
    } else if *s_elem == x1_gen {
        Q::one()
    } else {
        return Err(Error::ClassificationMismatch(format!(
            "image of x1 is neither 0 nor x1: {}",
            s_elem.show(sig)
        )));
    };

    let n = mg.vertex_count();
    if s.is_zero() {
        for v in 0..n {
            if !representative.image_of(mg.xv[v]).is_zero() {
                return Err(Error::ClassificationMismatch(
                    "s = 0 but some x[v] has a nonzero image".into(),
                ));
            }
        }
        return Ok(EndoClass {
            kind: EndoKind::Constant { s: 0 },
            representative,
            exact_freedom,
        });
    }

    // s = 1: inspect the x[v] images.
    let mut perm_images: Vec<Option<usize>> = vec![None; n];
    let mut span_support: Vec<(usize, Q, Q)> = Vec::new();
    let mut is_perm_shape = true;
    let mut is_span_shape = true;
    let x1p5 = Monomial::power(sig, mg.x1, 5).unwrap();
    let x2p4 = Monomial::power(sig, mg.x2, 4).unwrap();
    for v in 0..n {
        let img = representative.image_of(mg.xv[v]);
        if img.is_zero() {
            continue;
        }
        // Permutation shape: exactly x[w] with coefficient 1.
        let mut as_perm = None;
        if img.len() == 1 {
            let (m, c) = img.terms().next().unwrap();
            if c.is_one() {
                if let Some(w) = mg.xv.iter().position(|&g| Monomial::generator(sig, g) == *m) {
                    as_perm = Some(w);
                }
            }
        }
        match as_perm {
            Some(w) => {
                perm_images[v] = Some(w);
                is_span_shape = false;
            }
            None => {
                // Span shape: combination of x1^5 and x2^4 only.
                let c1 = img.coefficient(&x1p5).cloned().unwrap_or_else(Q::zero);
                let c2 = img.coefficient(&x2p4).cloned().unwrap_or_else(Q::zero);
                let rebuilt = Element::from_terms(
                    sig,
                    [(x1p5.clone(), c1.clone()), (x2p4.clone(), c2.clone())],
                );
                if rebuilt == *img {
                    span_support.push((v, c1, c2));
                    is_perm_shape = false;
                } else {
                    return Err(Error::ClassificationMismatch(format!(
                        "image of {} has an unrecognized shape: {}",
                        sig.name(mg.xv[v]),
                        img.show(sig)
                    )));
                }
            }
        }
    }

    if is_perm_shape && perm_images.iter().all(|i| i.is_some()) {
        let images: Vec<usize> = perm_images.into_iter().map(|i| i.unwrap()).collect();
        let perm = Perm::new(images)
            .map_err(|_| Error::ClassificationMismatch("vertex map is not a bijection".into()))?;
        // Edge-iff verification: the solver output must be a genuine
        // graph automorphism.
        let g = mg.graph();
        for a in 0..n {
            for b in a + 1..n {
                if g.has_edge(a, b) != g.has_edge(perm.apply(a), perm.apply(b)) {
                    return Err(Error::ClassificationMismatch(
                        "vertex permutation violates the edge condition".into(),
                    ));
                }
            }
        }
        return Ok(EndoClass {
            kind: EndoKind::Automorphism { perm },
            representative,
            exact_freedom,
        });
    }
    if is_span_shape {
        if span_support.is_empty() {
            return Ok(EndoClass {
                kind: EndoKind::Constant { s: 1 },
                representative,
                exact_freedom,
            });
        }
        return Ok(EndoClass {
            kind: EndoKind::MatchingProjection { support: span_support },
            representative,
            exact_freedom,
        });
    }
    Err(Error::ClassificationMismatch(
        "x[v] images mix permutation and projection shapes".into(),
    ))
}

/// Classifier with the degree-119 boundary matrix factorized once, so a
/// batch of homotopy queries is cheap.
pub struct HomotopyClassifier<'a> {
    pub classification: &'a Classification,
    solver: BoundarySolver,
}

impl<'a> HomotopyClassifier<'a> {
    pub fn new(classification: &'a Classification, budgets: &Budgets) -> Result<Self> {
        let solver = BoundarySolver::new(classification.mg.algebra(), DEG_Z, budgets)?;
        Ok(HomotopyClassifier { classification, solver })
    }

    /// The homotopy class of a validated endomorphism: the unique class
    /// whose representative agrees on every generator except z-types,
    /// where the differences must be exact. Anything else is a hard
    /// mismatch (it would contradict the classification).
    pub fn classify(&self, f: &Morphism) -> Result<usize> {
        if !f.is_dga_morphism()? {
            return Err(Error::precondition("classify_homotopy needs a dga morphism"));
        }
        let mg = &self.classification.mg;
        let alg = mg.algebra();
        let z_gens: BTreeSet<u32> =
            std::iter::once(mg.z).chain(mg.zv.iter().copied()).collect();
        'classes: for (i, class) in self.classification.classes.iter().enumerate() {
            for g in 0..alg.gen_count() as u32 {
                if z_gens.contains(&g) {
                    continue;
                }
                if f.image_of(g) != class.representative.image_of(g) {
                    continue 'classes;
                }
            }
            // Candidate found: check exactness of the z-type differences.
            for &g in &z_gens {
                let diff = f.image_of(g).sub(class.representative.image_of(g))?;
                if diff.is_zero() {
                    continue;
                }
                if !alg.differentiate(&diff)?.is_zero() {
                    return Err(Error::ClassificationMismatch(format!(
                        "difference on {} is not closed",
                        alg.sig().name(g)
                    )));
                }
                if self.solver.preimage(alg, &diff)?.is_none() {
                    return Err(Error::ClassificationMismatch(format!(
                        "difference on {} is closed but not exact",
                        alg.sig().name(g)
                    )));
                }
            }
            return Ok(i);
        }
        Err(Error::ClassificationMismatch(
            "morphism matches no classified representative on the rigid generators".into(),
        ))
    }
}

/// Perturb the z-type images of a representative by boundaries of random
/// degree-118 elements. The result is still a dga morphism in the same
/// homotopy class.
pub fn perturb_z_images(
    mg: &MGAlgebra,
    f: &Morphism,
    rng: &mut impl Rng,
    budgets: &Budgets,
) -> Result<Morphism> {
    let alg = mg.algebra();
    let mut out = f.clone();
    for g in std::iter::once(mg.z).chain(mg.zv.iter().copied()) {
        let m = alg.random_homogeneous(DEG_Z - 1, rng, 3, budgets)?;
        let dm = alg.differentiate(&m)?;
        let img = out.image_of(g).add(&dm)?;
        out = out.with_image(g, img)?;
    }
    Ok(out)
}

/// The group of homotopy classes of self-equivalences: composition table
/// of the automorphism classes, as a permutation group via the regular
/// representation, plus the witness isomorphism onto the graph's
/// automorphism group.
pub struct EquivalenceGroup {
    /// Indices (into the classification) of the equivalence classes.
    pub class_indices: Vec<usize>,
    /// Composition table over positions in `class_indices`.
    pub table: Vec<Vec<usize>>,
    pub group: PermGroup,
    pub iso_to_graph_aut: GroupIso,
}

pub fn equivalence_group(
    classification: &Classification,
    budgets: &Budgets,
) -> Result<EquivalenceGroup> {
    let classifier = HomotopyClassifier::new(classification, budgets)?;
    let auto = classification.automorphism_classes();
    let mut table = vec![vec![0usize; auto.len()]; auto.len()];
    for (i, &ci) in auto.iter().enumerate() {
        for (j, &cj) in auto.iter().enumerate() {
            let fi = &classification.classes[ci].representative;
            let fj = &classification.classes[cj].representative;
            let comp = fi.compose(fj)?;
            let k = classifier.classify(&comp)?;
            let pos = auto
                .iter()
                .position(|&c| c == k)
                .ok_or_else(|| Error::internal("equivalences compose out of the group part"))?;
            table[i][j] = pos;
        }
    }
    let group = PermGroup::from_table(&table)?;
    let graph_aut = automorphism_group(classification.mg.graph(), budgets)?;
    let iso = groups_isomorphic(&group, &graph_aut, budgets)?.ok_or_else(|| {
        Error::internal("equivalence group is not isomorphic to the graph automorphism group")
    })?;
    Ok(EquivalenceGroup { class_indices: auto, table, group, iso_to_graph_aut: iso })
}

/// The classical map f_sigma for a graph automorphism, built directly.
pub fn f_sigma(mg: &MGAlgebra, sigma: &Perm) -> Result<Morphism> {
    let alg = mg.algebra();
    let mut images = Vec::with_capacity(alg.gen_count());
    for g in 0..alg.gen_count() as u32 {
        let img = if let Some(v) = mg.xv.iter().position(|&x| x == g) {
            alg.generator(mg.xv[sigma.apply(v)])
        } else if let Some(v) = mg.zv.iter().position(|&z| z == g) {
            alg.generator(mg.zv[sigma.apply(v)])
        } else {
            alg.generator(g)
        };
        images.push(img);
    }
    Morphism::new(Arc::clone(alg), Arc::clone(alg), images)
}

/// The constant-type map f_s.
pub fn f_constant(mg: &MGAlgebra, s: u8) -> Result<Morphism> {
    let alg = mg.algebra();
    let mut images = Vec::with_capacity(alg.gen_count());
    for g in 0..alg.gen_count() as u32 {
        let is_vertex_gen = mg.xv.contains(&g) || mg.zv.contains(&g);
        let img = if is_vertex_gen || s == 0 {
            alg.zero()
        } else {
            alg.generator(g)
        };
        images.push(img);
    }
    Morphism::new(Arc::clone(alg), Arc::clone(alg), images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::mg::build_mg;
    use crate::ring::qi;

    #[test]
    fn p2_classification_finds_all_classes() {
        let g = parse_graph("a b\n").unwrap();
        let mg = build_mg(&g, qi(0), qi(1)).unwrap();
        let c = classify_endos(&mg, &Budgets::default()).unwrap();
        let names: Vec<String> = c.classes.iter().map(|cl| cl.kind.name(&mg)).collect();
        // The two constant classes, the two automorphism classes, and the
        // projection class supported on the unique edge.
        assert!(names.contains(&"id".to_string()));
        assert!(names.contains(&"sigma(1 2)".to_string()));
        assert!(names.contains(&"f0".to_string()));
        assert!(names.contains(&"f1".to_string()));
        assert!(names.contains(&"proj{a,b}".to_string()), "names: {names:?}");
        assert_eq!(c.class_count(), 5);
        assert!(c.verified_nodes > 0);
    }

    #[test]
    fn p2_projection_class_is_a_real_morphism_and_rigid() {
        // Direct construction: f fixes the core, sends both x[v] to
        // -x2^4 and both z[v] to 0. It commutes with d, and no homotopy
        // can change a degree-40 image (degree 39 is empty), so it is a
        // genuine fifth class.
        let g = parse_graph("a b\n").unwrap();
        let mg = build_mg(&g, qi(0), qi(1)).unwrap();
        let alg = mg.algebra();
        let sig = alg.sig();
        let x2p4 = Element::monomial(sig, Monomial::power(sig, mg.x2, 4).unwrap(), qi(-1));
        let mut f = Morphism::identity(Arc::clone(alg));
        for v in 0..2 {
            f = f.with_image(mg.xv[v], x2p4.clone()).unwrap();
            f = f.with_image(mg.zv[v], alg.zero()).unwrap();
        }
        assert!(f.is_dga_morphism().unwrap());
        assert!(alg.basis_of_degree(39, &Budgets::default()).unwrap().is_empty());
        let c = classify_endos(&mg, &Budgets::default()).unwrap();
        let classifier = HomotopyClassifier::new(&c, &Budgets::default()).unwrap();
        let idx = classifier.classify(&f).unwrap();
        assert!(matches!(
            c.classes[idx].kind,
            EndoKind::MatchingProjection { .. }
        ));
    }

    #[test]
    fn classify_identity_and_constants() {
        let g = parse_graph("a b\n").unwrap();
        let mg = build_mg(&g, qi(0), qi(1)).unwrap();
        let c = classify_endos(&mg, &Budgets::default()).unwrap();
        let classifier = HomotopyClassifier::new(&c, &Budgets::default()).unwrap();
        let id = Morphism::identity(Arc::clone(mg.algebra()));
        let idx = classifier.classify(&id).unwrap();
        assert!(matches!(
            c.classes[idx].kind,
            EndoKind::Automorphism { ref perm } if perm.is_identity()
        ));
        for s in [0u8, 1u8] {
            let f = f_constant(&mg, s).unwrap();
            let idx = classifier.classify(&f).unwrap();
            assert_eq!(c.classes[idx].kind, EndoKind::Constant { s });
        }
    }

    #[test]
    fn perturbed_representative_reclassifies_identically() {
        use rand::SeedableRng;
        let g = parse_graph("a b\n").unwrap();
        let mg = build_mg(&g, qi(0), qi(1)).unwrap();
        let b = Budgets::default();
        let c = classify_endos(&mg, &b).unwrap();
        let classifier = HomotopyClassifier::new(&c, &b).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (i, class) in c.classes.iter().enumerate() {
            for _ in 0..3 {
                let f = perturb_z_images(&mg, &class.representative, &mut rng, &b).unwrap();
                assert!(f.is_dga_morphism().unwrap());
                assert_eq!(classifier.classify(&f).unwrap(), i);
            }
        }
    }

    #[test]
    fn p2_equivalence_group_is_z2() {
        let g = parse_graph("a b\n").unwrap();
        let mg = build_mg(&g, qi(0), qi(1)).unwrap();
        let b = Budgets::default();
        let c = classify_endos(&mg, &b).unwrap();
        let eq = equivalence_group(&c, &b).unwrap();
        assert_eq!(eq.group.order(), 2);
    }
}
