//! The one-generator extension of an even-dimensional elliptic algebra:
//! adjoin an odd generator y with d(y) = x for a chosen top cocycle x,
//! extend self-maps, and certify that every mapping degree of the
//! extension lies in {0, 1}.

use std::sync::Arc;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{check_structure, SullivanAlgebra};
use crate::budget::Budgets;
use crate::classify::{Classification, EndoKind, HomotopyClassifier};
use crate::element::{Element, Homogeneity};
use crate::elliptic::EllipticityCertificate;
use crate::error::Error;
use crate::homology::{solve_exactness, ExactnessAnswer};
use crate::linalg::{Echelon, SparseMat};
use crate::mg::{build_core, formal_dimension, transport, MGAlgebra};
use crate::monomial::Monomial;
use crate::morphism::Morphism;
use crate::perm::Perm;
use crate::ring::{qi, Q};
use crate::Result;

/// The extension data: base algebra, chosen top cocycle x of degree 2n, a
/// witness with d(witness) = x^2, the extended algebra with the new odd
/// generator y of degree 2n-1 (d y = x), and the closed representative
/// x y - witness of the extension's top class.
#[derive(Debug, Clone)]
pub struct TildeExtension {
    pub base: Arc<SullivanAlgebra>,
    pub extended: Arc<SullivanAlgebra>,
    pub x: Element<Q>,
    pub z_witness: Element<Q>,
    /// Index of the adjoined generator in the extended algebra.
    pub y_gen: u32,
    pub fundamental_rep: Element<Q>,
    /// Whether the extension is still minimal (it is not when x has a
    /// linear part).
    pub minimal: bool,
    /// Half the degree of x.
    pub n: u64,
}

/// Adjoin y with d(y) = x. Preconditions verified exactly: x closed and
/// homogeneous of even degree 2n; z_witness homogeneous of degree 4n-1
/// with d(z_witness) = x^2.
pub fn tilde_extend(
    base: &Arc<SullivanAlgebra>,
    x: &Element<Q>,
    z_witness: &Element<Q>,
) -> Result<TildeExtension> {
    let degree = match x.homogeneous_degree() {
        Homogeneity::Degree(d) if d % 2 == 0 => d,
        Homogeneity::Degree(_) => {
            return Err(Error::precondition("top cocycle x must have even degree"))
        }
        Homogeneity::Zero => return Err(Error::precondition("top cocycle x must be nonzero")),
        Homogeneity::Mixed => {
            return Err(Error::precondition("top cocycle x must be homogeneous"))
        }
    };
    if !base.differentiate(x)?.is_zero() {
        return Err(Error::precondition("top cocycle x must be closed"));
    }
    let x_sq = x.mul(x, base.sig())?;
    if !z_witness.is_homogeneous_of(2 * degree - 1) {
        return Err(Error::precondition("witness must be homogeneous of degree 4n-1"));
    }
    if base.differentiate(z_witness)? != x_sq {
        return Err(Error::precondition("d(witness) must equal x^2"));
    }

    let sig = base.sig();
    let mut roster: Vec<(String, u64)> = (0..sig.len() as u32)
        .map(|g| (sig.name(g).to_string(), sig.degree(g)))
        .collect();
    let y_name = if sig.index_of("y").is_none() { "y" } else { "y_ext" };
    roster.push((y_name.to_string(), degree - 1));
    let ext_sig = crate::monomial::Signature::new(roster.clone());
    let y_gen = (ext_sig.len() - 1) as u32;

    let mut images: Vec<Element<Q>> = Vec::with_capacity(roster.len());
    let tmp = SullivanAlgebra::new(roster.clone(), {
        let mut v = vec![Element::zero(&ext_sig); roster.len()];
        // Transport base differentials by generator name.
        for g in 0..sig.len() as u32 {
            v[g as usize] = transport_raw(base.d_of(g), sig, &ext_sig)?;
        }
        v[y_gen as usize] = transport_raw(x, sig, &ext_sig)?;
        v
    })?;
    for g in 0..tmp.gen_count() as u32 {
        images.push(tmp.d_of(g).clone());
    }
    let extended = Arc::new(tmp);

    let report = check_structure(&extended);
    if !report.sullivan_ok() {
        return Err(Error::internal(format!(
            "extension failed structure checks: {:?}",
            report.findings
        )));
    }

    let xe = transport_raw(x, sig, extended.sig())?;
    let we = transport_raw(z_witness, sig, extended.sig())?;
    let y_el = extended.generator(y_gen);
    let fundamental_rep = xe.mul(&y_el, extended.sig())?.sub(&we)?;
    if !extended.differentiate(&fundamental_rep)?.is_zero() {
        return Err(Error::internal("fundamental representative is not closed"));
    }

    Ok(TildeExtension {
        base: Arc::clone(base),
        extended,
        x: x.clone(),
        z_witness: z_witness.clone(),
        y_gen,
        fundamental_rep,
        minimal: report.minimal,
        n: degree / 2,
    })
}

fn transport_raw(
    e: &Element<Q>,
    from: &crate::monomial::Signature,
    to: &crate::monomial::Signature,
) -> Result<Element<Q>> {
    let mut out = Element::zero(to);
    for (m, c) in e.terms() {
        let pairs: Result<Vec<(u32, u32)>> = m
            .factors()
            .iter()
            .map(|&(g, ex)| {
                to.index_of(from.name(g))
                    .map(|i| (i, ex))
                    .ok_or_else(|| Error::validation("generator missing in extension"))
            })
            .collect();
        let m2 = Monomial::new(to, &pairs?)
            .ok_or_else(|| Error::internal("parity changed in transport"))?;
        out.add_term(m2, c.clone());
    }
    Ok(out)
}

/// The canonical extension of a graph algebra: x = x1^21 x2^(4+8|V|)
/// (degree = the formal dimension), with the witness for d(w) = x^2
/// solved inside the vertex-free core subalgebra, where the boundary
/// space at that degree stays small.
pub fn tilde_of_mg(mg: &MGAlgebra, budgets: &Budgets) -> Result<TildeExtension> {
    let fd = formal_dimension(mg.algebra())? as u64;
    let core = build_core();
    let b = (fd - 168) / 10;
    let x_core = Element::monomial(
        core.sig(),
        Monomial::new(core.sig(), &[(0, 21), (1, b as u32)]).expect("even powers"),
        qi(1),
    );
    debug_assert!(x_core.is_homogeneous_of(fd));
    let x_sq = x_core.mul(&x_core, core.sig())?;
    let witness_core = match solve_exactness(&core, &x_sq, budgets)? {
        ExactnessAnswer::Exact { preimage } => preimage,
        ExactnessAnswer::NotExact { .. } => {
            return Err(Error::internal("core square of the top cocycle is not exact"))
        }
    };
    let x = transport(&x_core, &core, mg.algebra())?;
    let witness = transport(&witness_core, &core, mg.algebra())?;
    tilde_extend(mg.algebra(), &x, &witness)
}

/// Extend a self-map of the base across the new generator: find an exact
/// scalar a and witness m with f(x) = a x + d(m), then f~(y) = a y + m.
/// Any two extensions differ by an exact term on y.
pub fn extend_to_tilde(
    te: &TildeExtension,
    f: &Morphism,
    budgets: &Budgets,
) -> Result<(Morphism, Q)> {
    if !f.is_dga_morphism()? {
        return Err(Error::precondition("extend_to_tilde needs a dga morphism"));
    }
    let base = &te.base;
    if f.source().sig() != base.sig() || f.target().sig() != base.sig() {
        return Err(Error::precondition("morphism must be an endomorphism of the base"));
    }
    let fx = f.apply(&te.x)?;
    let degree = 2 * te.n;

    // Solve d(m) + a x = f(x) for (m, a): the boundary matrix into degree
    // 2n with one extra column holding x.
    let domain = base.basis_of_degree(degree - 1, budgets)?;
    let codomain = base.basis_of_degree(degree, budgets)?;
    let index: std::collections::BTreeMap<&Monomial, usize> =
        codomain.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = SparseMat::new(codomain.len(), domain.len() + 1);
    for (j, m) in domain.iter().enumerate() {
        let dm = base.differentiate(&Element::monomial(base.sig(), m.clone(), qi(1)))?;
        for (tm, c) in dm.terms() {
            mat.set(index[tm], j, c.clone());
        }
    }
    for (tm, c) in te.x.terms() {
        mat.set(index[tm], domain.len(), c.clone());
    }
    let mut rhs = vec![Q::zero(); codomain.len()];
    for (tm, c) in fx.terms() {
        match index.get(tm) {
            Some(&i) => rhs[i] = c.clone(),
            None => return Err(Error::internal("image escaped the degree basis")),
        }
    }
    let solution = Echelon::new(&mat)
        .solve(&rhs)
        .ok_or_else(|| Error::precondition("no scalar a with f(x) - a x exact"))?;
    let a = solution[domain.len()].clone();
    let mut m_x = base.zero();
    for (j, c) in solution[..domain.len()].iter().enumerate() {
        if !c.is_zero() {
            m_x.add_term(domain[j].clone(), c.clone());
        }
    }
    debug_assert_eq!(
        base.differentiate(&m_x)?.add(&te.x.scale(&a))?,
        fx,
        "solver returned a wrong decomposition"
    );

    let ext = &te.extended;
    let mut images: Vec<Element<Q>> = Vec::with_capacity(ext.gen_count());
    for g in 0..ext.gen_count() as u32 {
        if g == te.y_gen {
            let ay = ext.generator(te.y_gen).scale(&a);
            let m_t = transport_raw(&m_x, base.sig(), ext.sig())?;
            images.push(ay.add(&m_t)?);
        } else {
            let img = f.image_of(g);
            images.push(transport_raw(img, base.sig(), ext.sig())?);
        }
    }
    let f_tilde = Morphism::new(Arc::clone(ext), Arc::clone(ext), images)?;
    if !f_tilde.is_dga_morphism()? {
        return Err(Error::internal("extension failed d-commutation"));
    }
    Ok((f_tilde, a))
}

/// Scalar action on the base top class, as certified (never numerically
/// computed at the top degree).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalarBound {
    Exactly(i8),
    PlusMinusOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegreeJustification {
    /// The zero-type map annihilates everything.
    ZeroMap,
    /// The identity class.
    Identity,
    /// f_sigma has finite order k in the equivalence group, so a^k = 1
    /// over the rationals forces a in {-1, 1}.
    FiniteOrderAutomorphism { order: usize },
    /// The map kills a nonzero degree-40 class; by Poincare duality of
    /// the elliptic base the top class maps to zero. Verified by an
    /// exact kernel computation plus the ellipticity certificate, and
    /// cross-checked by idempotence of the class under composition.
    AnnihilatesTopFactor,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeCertificate {
    pub class_name: String,
    pub scalar: ScalarBound,
    pub justification: DegreeJustification,
    /// Mapping degree of the extended map: a^2.
    pub tilde_degree: u8,
}

/// Certify the scalar a (action on the base fundamental class) for every
/// classified self-map, and the induced degree a^2 of its extension.
pub fn degree_certificates(
    classification: &Classification,
    elliptic: &EllipticityCertificate,
    budgets: &Budgets,
) -> Result<Vec<DegreeCertificate>> {
    if !elliptic.elliptic {
        return Err(Error::precondition(
            "degree certificates need an elliptic base (Poincare duality)",
        ));
    }
    let mg = &classification.mg;
    let classifier = HomotopyClassifier::new(classification, budgets)?;
    // Orders of the automorphism classes from the composition table.
    let mut certs = Vec::new();
    for (i, class) in classification.classes.iter().enumerate() {
        let name = class.kind.name(mg);
        let cert = match &class.kind {
            EndoKind::Constant { s: 0 } => DegreeCertificate {
                class_name: name,
                scalar: ScalarBound::Exactly(0),
                justification: DegreeJustification::ZeroMap,
                tilde_degree: 0,
            },
            EndoKind::Automorphism { perm } if perm.is_identity() => DegreeCertificate {
                class_name: name,
                scalar: ScalarBound::Exactly(1),
                justification: DegreeJustification::Identity,
                tilde_degree: 1,
            },
            EndoKind::Automorphism { perm } => {
                // Class order: iterate composition until the identity
                // class returns; a^order = 1 forces a = +/-1 over Q.
                let mut power = class.representative.clone();
                let mut order = 1usize;
                let id_idx = classification
                    .find_kind(&EndoKind::Automorphism { perm: Perm::identity(perm.degree()) })
                    .ok_or_else(|| Error::internal("identity class missing"))?;
                while classifier.classify(&power)? != id_idx {
                    power = class.representative.compose(&power)?;
                    order += 1;
                    if order > classification.classes.len() + 2 {
                        return Err(Error::internal("automorphism class order diverges"));
                    }
                }
                DegreeCertificate {
                    class_name: name,
                    scalar: if order % 2 == 1 {
                        // Odd order: a^odd = 1 over Q forces a = 1.
                        ScalarBound::Exactly(1)
                    } else {
                        ScalarBound::PlusMinusOne
                    },
                    justification: DegreeJustification::FiniteOrderAutomorphism { order },
                    tilde_degree: 1,
                }
            }
            EndoKind::Constant { .. } | EndoKind::MatchingProjection { .. } => {
                verify_kills_degree40_class(mg, &class.representative, budgets)?;
                verify_idempotent(&classifier, i, &class.representative)?;
                DegreeCertificate {
                    class_name: name,
                    scalar: ScalarBound::Exactly(0),
                    justification: DegreeJustification::AnnihilatesTopFactor,
                    tilde_degree: 0,
                }
            }
        };
        certs.push(cert);
    }
    Ok(certs)
}

/// H^40 is spanned by the degree-40 monomials (nothing exists in degree
/// 39); the map must have a nonzero kernel there.
fn verify_kills_degree40_class(
    mg: &MGAlgebra,
    f: &Morphism,
    budgets: &Budgets,
) -> Result<()> {
    let alg = mg.algebra();
    if !alg.basis_of_degree(39, budgets)?.is_empty() {
        return Err(Error::internal("degree 39 unexpectedly nonempty"));
    }
    let basis = alg.basis_of_degree(40, budgets)?;
    let index: std::collections::BTreeMap<&Monomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = SparseMat::new(basis.len(), basis.len());
    for (j, m) in basis.iter().enumerate() {
        let img = f.apply(&Element::monomial(alg.sig(), m.clone(), qi(1)))?;
        for (tm, c) in img.terms() {
            mat.set(index[tm], j, c.clone());
        }
    }
    if mat.rank() >= basis.len() {
        return Err(Error::internal(
            "projection-type class acts injectively on degree 40",
        ));
    }
    Ok(())
}

/// The class composed with itself must return to itself (a^2 = a).
fn verify_idempotent(
    classifier: &HomotopyClassifier<'_>,
    index: usize,
    f: &Morphism,
) -> Result<()> {
    let ff = f.compose(f)?;
    if classifier.classify(&ff)? != index {
        return Err(Error::internal("projection-type class is not idempotent"));
    }
    Ok(())
}

/// Inflexibility of the extension: every certified degree in {0, 1} and
/// every base scalar in {-1, 0, 1}; also true that no class has degree -1
/// (degrees are squares).
pub fn is_inflexible(certs: &[DegreeCertificate]) -> bool {
    certs.iter().all(|c| {
        c.tilde_degree <= 1
            && match c.scalar {
                ScalarBound::Exactly(a) => (-1..=1).contains(&a),
                ScalarBound::PlusMinusOne => true,
            }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SullivanAlgebra;
    use crate::homology::cohomology_dim;

    fn sphere() -> Arc<SullivanAlgebra> {
        Arc::new(
            SullivanAlgebra::build(&[("a", 2), ("b", 3)], &[("b", &[(qi(1), &[("a", 2)])])])
                .unwrap(),
        )
    }

    #[test]
    fn tilde_of_sphere_has_three_sphere_cohomology() {
        let base = sphere();
        let a = base.by_name("a").unwrap();
        let b = base.by_name("b").unwrap();
        let te = tilde_extend(&base, &a, &b).unwrap();
        assert!(!te.minimal); // d(y) = a is linear
        let budgets = Budgets::default();
        let dims: Vec<usize> = (0..=6)
            .map(|k| cohomology_dim(&te.extended, k, &budgets).unwrap())
            .collect();
        assert_eq!(dims, vec![1, 0, 0, 1, 0, 0, 0]);
        // The formal-dimension formula is refused on non-minimal input.
        assert!(formal_dimension(&te.extended).is_err());
    }

    #[test]
    fn tilde_preconditions_enforced() {
        let base = sphere();
        let a = base.by_name("a").unwrap();
        let b = base.by_name("b").unwrap();
        // b is odd-degree.
        assert!(tilde_extend(&base, &b, &a).is_err());
        // wrong witness: d(a·b)? use witness = 2b: d(2b) = 2a^2 != a^2.
        assert!(tilde_extend(&base, &a, &b.scale(&qi(2))).is_err());
        // non-closed x.
        let mixed = a.add(&b).unwrap();
        assert!(tilde_extend(&base, &mixed, &b).is_err());
    }

    #[test]
    fn doubling_extends_with_scalar_two() {
        let base = sphere();
        let a = base.by_name("a").unwrap();
        let b = base.by_name("b").unwrap();
        let te = tilde_extend(&base, &a, &b).unwrap();
        let f = Morphism::new(
            Arc::clone(&base),
            Arc::clone(&base),
            vec![a.scale(&qi(2)), b.scale(&qi(4))],
        )
        .unwrap();
        let (f_tilde, scalar) = extend_to_tilde(&te, &f, &Budgets::default()).unwrap();
        assert_eq!(scalar, qi(2));
        // Degree on the fundamental representative: f~(ay - b) = 4(ay - b).
        let img = f_tilde.apply(&te.fundamental_rep).unwrap();
        assert_eq!(img, te.fundamental_rep.scale(&qi(4)));
    }

    #[test]
    fn identity_and_zero_extend_trivially() {
        let base = sphere();
        let a = base.by_name("a").unwrap();
        let b = base.by_name("b").unwrap();
        let te = tilde_extend(&base, &a, &b).unwrap();
        let id = Morphism::identity(Arc::clone(&base));
        let (id_t, s) = extend_to_tilde(&te, &id, &Budgets::default()).unwrap();
        assert_eq!(s, qi(1));
        assert!(id_t.is_identity());
        let zero = Morphism::new(
            Arc::clone(&base),
            Arc::clone(&base),
            vec![base.zero(), base.zero()],
        )
        .unwrap();
        let (z_t, s) = extend_to_tilde(&te, &zero, &Budgets::default()).unwrap();
        assert_eq!(s, qi(0));
        assert!(z_t.image_of(te.y_gen).is_zero());
    }
}
