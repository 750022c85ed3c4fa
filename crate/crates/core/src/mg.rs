//! The minimal Sullivan algebra attached to a finite connected graph, its
//! pure part, formal dimension, and the contravariant functor on full
//! graph monomorphisms.

use std::sync::Arc;

use crate::algebra::{check_structure, SullivanAlgebra};
use crate::element::Element;
use crate::error::Error;
use crate::graph::{is_full_monomorphism, Graph, GraphMorphism};
use crate::monomial::Monomial;
use crate::morphism::Morphism;
use crate::ring::{qi, Q};
use crate::Result;
use num::Zero;

/// Degrees of the fixed generator block.
pub const DEG_X1: u64 = 8;
pub const DEG_X2: u64 = 10;
pub const DEG_Y1: u64 = 33;
pub const DEG_Y2: u64 = 35;
pub const DEG_Y3: u64 = 37;
pub const DEG_XV: u64 = 40;
pub const DEG_Z: u64 = 119;

/// The Sullivan algebra of a graph: the fixed block x1, x2, y1, y2, y3, z
/// plus one even generator `x[v]` and one odd generator `z[v]` per vertex,
/// with the coupling differential
/// d(z[v]) = x[v]^3 + sum over edges (v,w) of x[v] x[w] (u1 x1^5 + u2 x2^4).
#[derive(Debug, Clone)]
pub struct MGAlgebra {
    algebra: Arc<SullivanAlgebra>,
    graph: Graph,
    variant: (Q, Q),
    /// Generator indices: x1, x2, y1, y2, y3, x[v] per vertex (label
    /// order), z, z[v] per vertex.
    pub x1: u32,
    pub x2: u32,
    pub y: [u32; 3],
    pub z: u32,
    /// x-generator index per graph vertex (in graph vertex order).
    pub xv: Vec<u32>,
    /// z-generator index per graph vertex.
    pub zv: Vec<u32>,
}

impl MGAlgebra {
    pub fn algebra(&self) -> &Arc<SullivanAlgebra> {
        &self.algebra
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn variant(&self) -> &(Q, Q) {
        &self.variant
    }

    pub fn vertex_count(&self) -> usize {
        self.xv.len()
    }
}

/// Build the algebra for a connected simple graph with at least two
/// vertices and a nonzero variant vector (u1, u2).
pub fn build_mg(graph: &Graph, u1: Q, u2: Q) -> Result<MGAlgebra> {
    if graph.n() < 2 {
        return Err(Error::validation("graph must have more than one vertex"));
    }
    if !graph.is_connected() {
        return Err(Error::validation("graph must be connected"));
    }
    if u1.is_zero() && u2.is_zero() {
        return Err(Error::validation("variant vector (u1, u2) must be nonzero"));
    }

    // Vertex order: sorted labels, so generator names are label-stable.
    let mut vorder: Vec<usize> = (0..graph.n()).collect();
    vorder.sort_by(|&a, &b| graph.label(a).cmp(graph.label(b)));

    let mut roster: Vec<(String, u64)> = vec![
        ("x1".into(), DEG_X1),
        ("x2".into(), DEG_X2),
        ("y1".into(), DEG_Y1),
        ("y2".into(), DEG_Y2),
        ("y3".into(), DEG_Y3),
    ];
    for &v in &vorder {
        roster.push((format!("x[{}]", graph.label(v)), DEG_XV));
    }
    roster.push(("z".into(), DEG_Z));
    for &v in &vorder {
        roster.push((format!("z[{}]", graph.label(v)), DEG_Z));
    }

    let sig = crate::monomial::Signature::new(roster.clone());
    let x1 = 0u32;
    let x2 = 1u32;
    let y = [2u32, 3u32, 4u32];
    let n = graph.n() as u32;
    let z = 5 + n;
    // xv_for[graph vertex] = generator index.
    let mut xv_for = vec![0u32; graph.n()];
    let mut zv_for = vec![0u32; graph.n()];
    for (slot, &v) in vorder.iter().enumerate() {
        xv_for[v] = 5 + slot as u32;
        zv_for[v] = 5 + n + 1 + slot as u32;
    }

    let mono = |pairs: &[(u32, u32)]| Monomial::new(&sig, pairs).expect("legal monomial");
    let mut images = vec![Element::zero(&sig); sig.len()];
    images[y[0] as usize] = Element::monomial(&sig, mono(&[(x1, 3), (x2, 1)]), qi(1));
    images[y[1] as usize] = Element::monomial(&sig, mono(&[(x1, 2), (x2, 2)]), qi(1));
    images[y[2] as usize] = Element::monomial(&sig, mono(&[(x1, 1), (x2, 3)]), qi(1));
    images[z as usize] = Element::from_terms(
        &sig,
        [
            (mono(&[(y[0], 1), (y[1], 1), (x1, 4), (x2, 2)]), qi(1)),
            (mono(&[(y[0], 1), (y[2], 1), (x1, 5), (x2, 1)]), qi(-1)),
            (mono(&[(y[1], 1), (y[2], 1), (x1, 6)]), qi(1)),
            (mono(&[(x1, 15)]), qi(1)),
            (mono(&[(x2, 12)]), qi(1)),
        ],
    );
    for v in 0..graph.n() {
        let mut dzv = Element::monomial(&sig, mono(&[(xv_for[v], 3)]), qi(1));
        for w in graph.neighbors(v) {
            if !u1.is_zero() {
                dzv.add_term(mono(&[(xv_for[v], 1), (xv_for[w], 1), (x1, 5)]), u1.clone());
            }
            if !u2.is_zero() {
                dzv.add_term(mono(&[(xv_for[v], 1), (xv_for[w], 1), (x2, 4)]), u2.clone());
            }
        }
        images[zv_for[v] as usize] = dzv;
    }

    let algebra = SullivanAlgebra::new(roster, images)?;
    let report = check_structure(&algebra);
    if !report.all_pass() {
        return Err(Error::internal(format!(
            "constructed algebra failed structure checks: {:?}",
            report.findings
        )));
    }
    Ok(MGAlgebra {
        algebra: Arc::new(algebra),
        graph: graph.clone(),
        variant: (u1, u2),
        x1,
        x2,
        y,
        z,
        xv: xv_for,
        zv: zv_for,
    })
}

/// The vertex-free core Lambda(x1, x2, y1, y2, y3, z) with the same
/// differentials; elements of the core embed into any graph algebra by
/// generator name.
pub fn build_core() -> SullivanAlgebra {
    SullivanAlgebra::build(
        &[
            ("x1", DEG_X1),
            ("x2", DEG_X2),
            ("y1", DEG_Y1),
            ("y2", DEG_Y2),
            ("y3", DEG_Y3),
            ("z", DEG_Z),
        ],
        &[
            ("y1", &[(qi(1), &[("x1", 3), ("x2", 1)])]),
            ("y2", &[(qi(1), &[("x1", 2), ("x2", 2)])]),
            ("y3", &[(qi(1), &[("x1", 1), ("x2", 3)])]),
            (
                "z",
                &[
                    (qi(1), &[("y1", 1), ("y2", 1), ("x1", 4), ("x2", 2)]),
                    (qi(-1), &[("y1", 1), ("y3", 1), ("x1", 5), ("x2", 1)]),
                    (qi(1), &[("y2", 1), ("y3", 1), ("x1", 6)]),
                    (qi(1), &[("x1", 15)]),
                    (qi(1), &[("x2", 12)]),
                ],
            ),
        ],
    )
    .expect("core algebra is well formed")
}

/// Re-express an element of one algebra inside another that carries all
/// the same generator names (e.g. core -> graph algebra).
pub fn transport(
    e: &Element<Q>,
    from: &SullivanAlgebra,
    to: &SullivanAlgebra,
) -> Result<Element<Q>> {
    let mut out = to.zero();
    for (m, c) in e.terms() {
        let pairs: Result<Vec<(u32, u32)>> = m
            .factors()
            .iter()
            .map(|&(g, ex)| {
                to.sig()
                    .index_of(from.sig().name(g))
                    .map(|i| (i, ex))
                    .ok_or_else(|| Error::validation("generator missing in target algebra"))
            })
            .collect();
        let m2 = Monomial::new(to.sig(), &pairs?)
            .ok_or_else(|| Error::internal("parity changed under transport"))?;
        out.add_term(m2, c.clone());
    }
    Ok(out)
}

/// The pure part: d_sigma = 0 on even generators; on odd generators only
/// the monomials built entirely from even generators survive.
pub fn pure_part(alg: &SullivanAlgebra) -> SullivanAlgebra {
    let sig = alg.sig();
    let roster: Vec<(String, u64)> = (0..sig.len() as u32)
        .map(|g| (sig.name(g).to_string(), sig.degree(g)))
        .collect();
    let images: Vec<Element<Q>> = (0..sig.len() as u32)
        .map(|g| {
            if !sig.is_odd(g) {
                return Element::zero(sig);
            }
            Element::from_terms(
                sig,
                alg.d_of(g)
                    .terms()
                    .filter(|(m, _)| m.factors().iter().all(|&(h, _)| !sig.is_odd(h)))
                    .map(|(m, c)| (m.clone(), c.clone())),
            )
        })
        .collect();
    SullivanAlgebra::new(roster, images).expect("pure part of a valid algebra is valid")
}

/// Formal dimension by the top-degree formula: sum over odd generators of
/// the degree minus sum over even generators of (degree - 1). Asserted
/// only for minimal algebras; non-minimal input is refused (compute
/// cohomology degreewise instead).
pub fn formal_dimension(alg: &SullivanAlgebra) -> Result<i64> {
    let report = check_structure(alg);
    if !report.sullivan_ok() {
        return Err(Error::precondition("formal dimension needs a valid Sullivan algebra"));
    }
    if !report.minimal {
        return Err(Error::precondition(
            "formal dimension formula applies to minimal algebras only; \
             use cohomology_dim degreewise for non-minimal input",
        ));
    }
    let sig = alg.sig();
    let mut total: i64 = 0;
    for g in 0..sig.len() as u32 {
        let d = sig.degree(g) as i64;
        if sig.is_odd(g) {
            total += d;
        } else {
            total -= d - 1;
        }
    }
    Ok(total)
}

/// The contravariant functor on a full graph monomorphism sigma: G1 -> G2:
/// a morphism M(sigma): M_{G2} -> M_{G1} fixing the core block, sending
/// x[v'] to x[v] when sigma(v) = v' and to 0 otherwise (same for z).
pub fn functor_morphism(
    m: &GraphMorphism,
    target_alg: &MGAlgebra,
    source_alg: &MGAlgebra,
) -> Result<Morphism> {
    if !is_full_monomorphism(m) {
        return Err(Error::precondition("functor_morphism needs a full monomorphism"));
    }
    if target_alg.variant != source_alg.variant {
        return Err(Error::precondition("algebras must share the variant (u1, u2)"));
    }
    if m.source != *source_alg.graph() || m.target != *target_alg.graph() {
        return Err(Error::validation("graph morphism does not connect these algebras"));
    }
    let a2 = target_alg.algebra(); // on G2, the source of the algebra map
    let a1 = source_alg.algebra(); // on G1, the target of the algebra map
    let mut images: Vec<Element<Q>> = Vec::with_capacity(a2.gen_count());
    for g in 0..a2.gen_count() as u32 {
        let name = a2.sig().name(g);
        let img = if let Some(vlabel) = name.strip_prefix("x[").and_then(|s| s.strip_suffix(']')) {
            let v2 = target_alg
                .graph()
                .index_of(vlabel)
                .ok_or_else(|| Error::internal("generator label missing in graph"))?;
            match m.vertex_map.iter().position(|&w| w == v2) {
                Some(v1) => a1.generator(source_alg.xv[v1]),
                None => a1.zero(),
            }
        } else if let Some(vlabel) = name.strip_prefix("z[").and_then(|s| s.strip_suffix(']')) {
            let v2 = target_alg
                .graph()
                .index_of(vlabel)
                .ok_or_else(|| Error::internal("generator label missing in graph"))?;
            match m.vertex_map.iter().position(|&w| w == v2) {
                Some(v1) => a1.generator(source_alg.zv[v1]),
                None => a1.zero(),
            }
        } else {
            a1.by_name(name)?
        };
        images.push(img);
    }
    let f = Morphism::new(Arc::clone(a2), Arc::clone(a1), images)?;
    if !f.is_dga_morphism()? {
        return Err(Error::internal("functor image failed d-commutation"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budgets;
    use crate::graph::parse_graph;
    use crate::ring::q;

    pub fn p2() -> Graph {
        parse_graph("a b\n").unwrap()
    }

    fn p3() -> Graph {
        parse_graph("a b\nb c\n").unwrap()
    }

    #[test]
    fn p2_roster_and_differential() {
        let mg = build_mg(&p2(), qi(0), qi(1)).unwrap();
        let alg = mg.algebra();
        assert_eq!(alg.gen_count(), 10);
        // d(z[a]) = x[a]^3 + x[a] x[b] x2^4
        let dza = alg.d_of(mg.zv[0]);
        assert_eq!(dza.len(), 2);
        let sig = alg.sig();
        let xa = mg.xv[0];
        let xb = mg.xv[1];
        let cube = Monomial::new(sig, &[(xa, 3)]).unwrap();
        let mixed = Monomial::new(sig, &[(xa, 1), (xb, 1), (mg.x2, 4)]).unwrap();
        assert_eq!(dza.coefficient(&cube), Some(&qi(1)));
        assert_eq!(dza.coefficient(&mixed), Some(&qi(1)));
    }

    #[test]
    fn variant_couples_through_x1() {
        let mg = build_mg(&p2(), qi(1), qi(0)).unwrap();
        let alg = mg.algebra();
        let sig = alg.sig();
        let dza = alg.d_of(mg.zv[0]);
        let mixed = Monomial::new(sig, &[(mg.xv[0], 1), (mg.xv[1], 1), (mg.x1, 5)]).unwrap();
        assert_eq!(dza.coefficient(&mixed), Some(&qi(1)));
        // Mixed rational variant.
        let mg = build_mg(&p2(), q(1, 2), qi(3)).unwrap();
        let dza = mg.algebra().d_of(mg.zv[0]);
        assert_eq!(dza.len(), 3);
    }

    #[test]
    fn rejects_bad_inputs() {
        let single = parse_graph("vertex a\n").unwrap();
        assert!(build_mg(&single, qi(0), qi(1)).is_err());
        let disconnected = parse_graph("a b\nvertex c\n").unwrap();
        assert!(build_mg(&disconnected, qi(0), qi(1)).is_err());
        assert!(build_mg(&p2(), qi(0), qi(0)).is_err());
    }

    #[test]
    fn formal_dimensions() {
        let mg = build_mg(&p2(), qi(0), qi(1)).unwrap();
        assert_eq!(formal_dimension(mg.algebra()).unwrap(), 368);
        let mg3 = build_mg(&p3(), qi(0), qi(1)).unwrap();
        assert_eq!(formal_dimension(mg3.algebra()).unwrap(), 448);
        let sphere = SullivanAlgebra::build(
            &[("a", 2), ("b", 3)],
            &[("b", &[(qi(1), &[("a", 2)])])],
        )
        .unwrap();
        assert_eq!(formal_dimension(&sphere).unwrap(), 2);
    }

    #[test]
    fn degree_40_basis_has_vertex_count_plus_two() {
        let mg = build_mg(&p2(), qi(0), qi(1)).unwrap();
        let b = mg.algebra().basis_of_degree(40, &Budgets::default()).unwrap();
        assert_eq!(b.len(), 4); // x1^5, x2^4, x[a], x[b]
        let empty = mg.algebra().basis_of_degree(7, &Budgets::default()).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn degree_119_basis_matches_template_shape() {
        // Independent enumeration: the degree-119 monomials are z, z[w],
        // six y_i x1^a x2^b shapes, and three x[w] y_i x1^a x2^b shapes
        // per vertex. 15 in total for two vertices.
        let mg = build_mg(&p2(), qi(0), qi(1)).unwrap();
        let b = mg.algebra().basis_of_degree(119, &Budgets::default()).unwrap();
        assert_eq!(b.len(), 15);
        let sig = mg.algebra().sig();
        let odd_gen_count = |m: &Monomial| {
            m.factors().iter().filter(|&&(g, _)| sig.is_odd(g)).count()
        };
        for m in &b {
            assert_eq!(odd_gen_count(m), 1, "unexpected shape {}", m.show(sig));
        }
    }

    #[test]
    fn pure_part_drops_odd_monomials_and_is_idempotent() {
        let mg = build_mg(&p2(), qi(0), qi(1)).unwrap();
        let pure = pure_part(mg.algebra());
        let dz = pure.d_of(mg.z);
        // d_sigma(z) = x1^15 + x2^12
        assert_eq!(dz.len(), 2);
        let sig = pure.sig();
        assert_eq!(
            dz.coefficient(&Monomial::new(sig, &[(mg.x1, 15)]).unwrap()),
            Some(&qi(1))
        );
        assert_eq!(
            dz.coefficient(&Monomial::new(sig, &[(mg.x2, 12)]).unwrap()),
            Some(&qi(1))
        );
        // d_sigma(y1) unchanged.
        assert_eq!(pure.d_of(mg.y[0]), mg.algebra().d_of(mg.y[0]));
        let pure2 = pure_part(&pure);
        for g in 0..pure.gen_count() as u32 {
            assert_eq!(pure.d_of(g), pure2.d_of(g));
        }
    }

    #[test]
    fn core_transport() {
        let core = build_core();
        let mg = build_mg(&p2(), qi(0), qi(1)).unwrap();
        let e = core.by_name("z").unwrap();
        let t = transport(&e, &core, mg.algebra()).unwrap();
        assert_eq!(t, mg.algebra().generator(mg.z));
    }
}
