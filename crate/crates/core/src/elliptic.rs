//! Ellipticity certificates: finite-dimensionality of the pure quotient
//! (even polynomial ring modulo the pure differentials of the odd
//! generators) established by a Groebner basis whose leading-term ideal
//! contains a pure power of every even variable.

use serde::{Deserialize, Serialize};

use crate::algebra::SullivanAlgebra;
use crate::budget::Budgets;
use crate::element::Element;
use crate::error::Error;
use crate::groebner::{groebner_basis, pure_power_in_lt};
use crate::homology::{solve_exactness, ExactnessAnswer};
use crate::mg::{pure_part, MGAlgebra};
use crate::monomial::Monomial;
use crate::mpoly::{MPoly, PMonomial};
use crate::ring::qi;
use crate::serial::{element_to_terms, TermDoc};
use crate::Result;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EllipticityCertificate {
    /// Certificate verdict: every even generator nilpotent in the pure
    /// quotient.
    pub elliptic: bool,
    /// Even generator name -> smallest pure-power exponent found in the
    /// leading-term ideal (absent when none exists).
    pub nilpotence_exponents: Vec<(String, Option<u32>)>,
    /// Rendered Groebner leading terms.
    pub groebner_leading_terms: Vec<String>,
    /// Rendered ideal generators (the pure differentials of odd gens).
    pub pure_ideal_generators: Vec<String>,
    /// Explicit exactness witnesses in the pure part (graph algebras
    /// only): target and preimage term lists.
    pub witnesses: Vec<WitnessDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub target: Vec<TermDoc>,
    pub preimage: Vec<TermDoc>,
}

/// Certificate for an arbitrary Sullivan algebra.
pub fn ellipticity_certificate(alg: &SullivanAlgebra, budgets: &Budgets) -> Result<EllipticityCertificate> {
    certificate_inner(alg, None, budgets)
}

/// Certificate for a graph algebra; additionally re-verifies the explicit
/// pure-part witnesses for x1^17 and x2^13.
pub fn ellipticity_certificate_mg(
    mg: &MGAlgebra,
    budgets: &Budgets,
) -> Result<EllipticityCertificate> {
    certificate_inner(mg.algebra(), Some(mg), budgets)
}

fn certificate_inner(
    alg: &SullivanAlgebra,
    mg: Option<&MGAlgebra>,
    budgets: &Budgets,
) -> Result<EllipticityCertificate> {
    let sig = alg.sig();
    let pure = pure_part(alg);

    // Even generators become the polynomial variables, in index order.
    let even: Vec<u32> = (0..sig.len() as u32).filter(|&g| !sig.is_odd(g)).collect();
    let var_of = |g: u32| even.iter().position(|&h| h == g).map(|i| i as u32);
    let names = |v: u32| sig.name(even[v as usize]).to_string();

    let mut gens: Vec<MPoly> = Vec::new();
    let mut rendered_gens: Vec<String> = Vec::new();
    for g in 0..sig.len() as u32 {
        if !sig.is_odd(g) {
            continue;
        }
        let image = pure.d_of(g);
        if image.is_zero() {
            continue;
        }
        let mut p = MPoly::zero();
        for (m, c) in image.terms() {
            let pairs: Option<Vec<(u32, u32)>> = m
                .factors()
                .iter()
                .map(|&(h, e)| var_of(h).map(|v| (v, e)))
                .collect();
            let pairs = pairs.ok_or_else(|| {
                Error::internal("pure differential mentions an odd generator")
            })?;
            p.add_term(PMonomial::from_pairs(&pairs), c.clone());
        }
        rendered_gens.push(format!("d_sigma({}) = {}", sig.name(g), p.show(&names)));
        gens.push(p);
    }

    let gb = groebner_basis(&gens, budgets)?;
    let groebner_leading_terms: Vec<String> = gb
        .iter()
        .map(|g| {
            let (m, _) = g.leading().expect("reduced basis has no zero");
            MPoly::from_terms([(m.clone(), qi(1))]).show(&names)
        })
        .collect();

    let mut nilpotence_exponents = Vec::new();
    let mut elliptic = true;
    for (v, &g) in even.iter().enumerate() {
        let e = pure_power_in_lt(&gb, v as u32);
        if e.is_none() {
            elliptic = false;
        }
        nilpotence_exponents.push((sig.name(g).to_string(), e));
    }

    let mut witnesses = Vec::new();
    if let Some(mg) = mg {
        for (gen, exp) in [(mg.x1, 17u32), (mg.x2, 13u32)] {
            let target = Element::monomial(
                sig,
                Monomial::power(sig, gen, exp).expect("even power"),
                qi(1),
            );
            match solve_exactness(&pure, &target, budgets)? {
                ExactnessAnswer::Exact { preimage } => {
                    debug_assert_eq!(pure.differentiate(&preimage)?, target);
                    witnesses.push(WitnessDoc {
                        target: element_to_terms(&target, sig),
                        preimage: element_to_terms(&preimage, sig),
                    });
                }
                ExactnessAnswer::NotExact { .. } => {
                    return Err(Error::internal(format!(
                        "pure-part witness {}^{} is not exact",
                        sig.name(gen),
                        exp
                    )));
                }
            }
        }
    }

    Ok(EllipticityCertificate {
        elliptic,
        nilpotence_exponents,
        groebner_leading_terms,
        pure_ideal_generators: rendered_gens,
        witnesses,
    })
}

/// The two explicit pure-part identities, evaluated exactly:
/// d_sigma(z x1^2 - y2 x2^10) = x1^17 and d_sigma(z x2 - y1 x1^12) = x2^13.
pub fn verify_pure_witness_identities(mg: &MGAlgebra) -> Result<bool> {
    let alg = mg.algebra();
    let sig = alg.sig();
    let pure = pure_part(alg);
    let z = alg.generator(mg.z);
    let y1 = alg.generator(mg.y[0]);
    let y2 = alg.generator(mg.y[1]);
    let x1p2 = Element::monomial(sig, Monomial::power(sig, mg.x1, 2).unwrap(), qi(1));
    let x2p10 = Element::monomial(sig, Monomial::power(sig, mg.x2, 10).unwrap(), qi(1));
    let first = z.mul(&x1p2, sig)?.sub(&y2.mul(&x2p10, sig)?)?;
    let x1p17 = Element::monomial(sig, Monomial::power(sig, mg.x1, 17).unwrap(), qi(1));
    let ok1 = pure.differentiate(&first)? == x1p17;

    let x2e = Element::monomial(sig, Monomial::power(sig, mg.x2, 1).unwrap(), qi(1));
    let x1p12 = Element::monomial(sig, Monomial::power(sig, mg.x1, 12).unwrap(), qi(1));
    let second = z.mul(&x2e, sig)?.sub(&y1.mul(&x1p12, sig)?)?;
    let x2p13 = Element::monomial(sig, Monomial::power(sig, mg.x2, 13).unwrap(), qi(1));
    let ok2 = pure.differentiate(&second)? == x2p13;
    Ok(ok1 && ok2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SullivanAlgebra;
    use crate::graph::parse_graph;
    use crate::mg::build_mg;

    #[test]
    fn sphere_is_elliptic() {
        let alg = SullivanAlgebra::build(
            &[("a", 2), ("b", 3)],
            &[("b", &[(qi(1), &[("a", 2)])])],
        )
        .unwrap();
        let cert = ellipticity_certificate(&alg, &Budgets::default()).unwrap();
        assert!(cert.elliptic);
        assert_eq!(cert.nilpotence_exponents, vec![("a".to_string(), Some(2))]);
    }

    #[test]
    fn free_even_generator_is_not_elliptic() {
        let alg = SullivanAlgebra::build(&[("a", 2)], &[]).unwrap();
        let cert = ellipticity_certificate(&alg, &Budgets::default()).unwrap();
        assert!(!cert.elliptic);
    }

    #[test]
    fn p2_algebra_is_elliptic_with_witnesses() {
        let g = parse_graph("a b\n").unwrap();
        let mg = build_mg(&g, qi(0), qi(1)).unwrap();
        let cert = ellipticity_certificate_mg(&mg, &Budgets::default()).unwrap();
        assert!(cert.elliptic, "exponents: {:?}", cert.nilpotence_exponents);
        assert_eq!(cert.witnesses.len(), 2);
        assert!(verify_pure_witness_identities(&mg).unwrap());
    }
}
