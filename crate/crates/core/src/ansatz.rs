//! Degree-generic endomorphism templates: for each generator, the full
//! monomial basis of its degree with one fresh unknown coefficient per
//! basis monomial.

use crate::budget::Budgets;
use crate::element::Element;
use crate::mg::MGAlgebra;
use crate::monomial::Monomial;
use crate::mpoly::MPoly;
use crate::Result;

/// Table of unknown coefficients, named for auditability.
#[derive(Debug, Clone, Default)]
pub struct UnknownTable {
    names: Vec<String>,
}

impl UnknownTable {
    pub fn fresh(&mut self, name: String) -> u32 {
        let id = self.names.len() as u32;
        self.names.push(name);
        id
    }

    pub fn name(&self, v: u32) -> &str {
        &self.names[v as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }
}

/// The generic self-map ansatz of a graph algebra.
#[derive(Debug, Clone)]
pub struct GenericMorphism {
    pub unknowns: UnknownTable,
    /// For each generator (index order): its image template, a linear
    /// combination of the degree-matching basis monomials with fresh
    /// unknown coefficients.
    pub templates: Vec<Element<MPoly>>,
    /// (generator, basis monomial) of each unknown, parallel to the table.
    pub provenance: Vec<(u32, Monomial)>,
}

/// Build the ansatz. Unknowns follow the classical naming scheme for
/// this algebra family (a1, a2, b_i, c, c(w), e(v), a(v,w), a1(v), a2(v)
/// and the alpha/beta/gamma families); anything unrecognized falls back
/// to `u[gen|monomial]`.
pub fn generic_ansatz(mg: &MGAlgebra, budgets: &Budgets) -> Result<GenericMorphism> {
    let alg = mg.algebra();
    let sig = alg.sig();
    let mut unknowns = UnknownTable::default();
    let mut provenance = Vec::new();
    let mut templates = Vec::with_capacity(alg.gen_count());
    for g in 0..alg.gen_count() as u32 {
        let basis = alg.basis_of_degree(sig.degree(g), budgets)?;
        let mut tpl: Element<MPoly> = Element::zero(sig);
        for m in basis {
            let name = unknown_name(mg, g, &m);
            let v = unknowns.fresh(name);
            provenance.push((g, m.clone()));
            tpl.add_term(m, MPoly::var(v));
        }
        templates.push(tpl);
    }
    Ok(GenericMorphism { unknowns, templates, provenance })
}

fn vertex_label<'a>(mg: &'a MGAlgebra, gen: u32) -> Option<&'a str> {
    let name = mg.algebra().sig().name(gen);
    name.strip_prefix("x[")
        .or_else(|| name.strip_prefix("z["))
        .and_then(|s| s.strip_suffix(']'))
}

fn unknown_name(mg: &MGAlgebra, g: u32, m: &Monomial) -> String {
    let sig = mg.algebra().sig();
    let fallback = || format!("u[{}|{}]", sig.name(g), m.show(sig));

    if g == mg.x1 {
        return "a1".to_string();
    }
    if g == mg.x2 {
        return "a2".to_string();
    }
    for (i, &y) in mg.y.iter().enumerate() {
        if g == y {
            return format!("b{}", i + 1);
        }
    }
    if let Some(v) = vertex_label(mg, g) {
        if sig.name(g).starts_with("x[") {
            // x[v] template: a(v,w) x[w] + a1(v) x1^5 + a2(v) x2^4.
            if let Some(w) = single_vertex_factor(mg, m) {
                return format!("a({},{})", v, w);
            }
            if m.exponent_of(mg.x1) == 5 && m.factors().len() == 1 {
                return format!("a1({})", v);
            }
            if m.exponent_of(mg.x2) == 4 && m.factors().len() == 1 {
                return format!("a2({})", v);
            }
            return fallback();
        }
        // z[v] template.
        if m.factors().len() == 1 {
            if m.exponent_of(mg.z) == 1 {
                return format!("e({})", v);
            }
            if let Some(w) = single_z_factor(mg, m) {
                return format!("c({},{})", v, w);
            }
        }
        return greek_name(mg, m, Some(v)).unwrap_or_else(fallback);
    }
    if g == mg.z {
        if m.factors().len() == 1 {
            if m.exponent_of(mg.z) == 1 {
                return "c".to_string();
            }
            if let Some(w) = single_z_factor(mg, m) {
                return format!("c({})", w);
            }
        }
        return greek_name(mg, m, None).unwrap_or_else(fallback);
    }
    fallback()
}

/// x[w] alone with exponent 1 -> Some(w).
fn single_vertex_factor(mg: &MGAlgebra, m: &Monomial) -> Option<String> {
    if m.factors().len() != 1 || m.factors()[0].1 != 1 {
        return None;
    }
    let g = m.factors()[0].0;
    let name = mg.algebra().sig().name(g);
    name.strip_prefix("x[").and_then(|s| s.strip_suffix(']')).map(str::to_string)
}

fn single_z_factor(mg: &MGAlgebra, m: &Monomial) -> Option<String> {
    if m.factors().len() != 1 || m.factors()[0].1 != 1 {
        return None;
    }
    let g = m.factors()[0].0;
    let name = mg.algebra().sig().name(g);
    name.strip_prefix("z[").and_then(|s| s.strip_suffix(']')).map(str::to_string)
}

/// Names for the degree-119 odd monomials: y1 -> alpha, y2 -> beta,
/// y3 -> gamma; subscript 3 when an x[w] factor is present (argument w
/// appended), otherwise 1 for the x2-heavy shape and 2 for the x1-heavy
/// shape. `vertex` is the v of a z[v] template, absent for z itself.
fn greek_name(mg: &MGAlgebra, m: &Monomial, vertex: Option<&str>) -> Option<String> {
    let sig = mg.algebra().sig();
    let mut y_index = None;
    let mut xw: Option<String> = None;
    for &(g, e) in m.factors() {
        if g == mg.x1 || g == mg.x2 {
            continue;
        }
        if let Some(i) = mg.y.iter().position(|&y| y == g) {
            if e != 1 || y_index.is_some() {
                return None;
            }
            y_index = Some(i);
            continue;
        }
        let name = sig.name(g);
        if let Some(w) = name.strip_prefix("x[").and_then(|s| s.strip_suffix(']')) {
            if e != 1 || xw.is_some() {
                return None;
            }
            xw = Some(w.to_string());
            continue;
        }
        return None;
    }
    let base = ["alpha", "beta", "gamma"][y_index?];
    let mut args: Vec<String> = Vec::new();
    if let Some(v) = vertex {
        args.push(v.to_string());
    }
    let sub = match &xw {
        Some(w) => {
            args.push(w.clone());
            3
        }
        // Subscript 1 when x2 dominates, 2 when x1 dominates.
        None => {
            if m.exponent_of(mg.x2) > m.exponent_of(mg.x1) {
                1
            } else {
                2
            }
        }
    };
    if args.is_empty() {
        Some(format!("{base}{sub}"))
    } else {
        Some(format!("{base}{sub}({})", args.join(",")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::mg::build_mg;
    use crate::ring::qi;

    #[test]
    fn p2_unknown_counts_match_closed_forms() {
        let g = parse_graph("a b\n").unwrap();
        let mg = build_mg(&g, qi(0), qi(1)).unwrap();
        let gm = generic_ansatz(&mg, &Budgets::default()).unwrap();
        let n = mg.vertex_count();
        let count_for = |gen: u32| gm.provenance.iter().filter(|(h, _)| *h == gen).count();
        assert_eq!(count_for(mg.x1), 1);
        assert_eq!(count_for(mg.x2), 1);
        for &y in &mg.y {
            assert_eq!(count_for(y), 1);
        }
        for &xv in &mg.xv {
            assert_eq!(count_for(xv), n + 2);
        }
        assert_eq!(count_for(mg.z), 7 + 4 * n);
        for &zv in &mg.zv {
            assert_eq!(count_for(zv), 7 + 4 * n);
        }
        // Paper-style names resolved.
        assert!(gm.unknowns.index_of("a1").is_some());
        assert!(gm.unknowns.index_of("a(a,b)").is_some());
        assert!(gm.unknowns.index_of("a2(a)").is_some());
        assert!(gm.unknowns.index_of("c").is_some());
        assert!(gm.unknowns.index_of("c(a)").is_some());
        assert!(gm.unknowns.index_of("e(a)").is_some());
        assert!(gm.unknowns.index_of("c(a,b)").is_some());
        assert!(gm.unknowns.index_of("alpha1").is_some());
        assert!(gm.unknowns.index_of("beta2").is_some());
        assert!(gm.unknowns.index_of("gamma3(b)").is_some());
        assert!(gm.unknowns.index_of("alpha1(a)").is_some());
        assert!(gm.unknowns.index_of("beta3(a,b)").is_some());
    }
}
