use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budgets;
use crate::element::{Element, Homogeneity};
use crate::error::Error;
use crate::monomial::{Monomial, Signature};
use crate::ring::{qi, Ring, Q};
use crate::Result;

/// A free graded-commutative cochain algebra `Lambda W` with a
/// differential given on generators. Construction validates that every
/// generator has degree >= 2 (simple connectivity) and that differential
/// images live over the declared roster; the deeper structural conditions
/// are reported by [`check_structure`].
#[derive(Debug, Clone)]
pub struct SullivanAlgebra {
    sig: Arc<Signature>,
    diff: Vec<Element<Q>>,
}

impl SullivanAlgebra {
    pub fn new(gens: Vec<(String, u64)>, diff: Vec<Element<Q>>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for (name, degree) in &gens {
            if *degree < 2 {
                return Err(Error::validation(format!(
                    "generator {} has degree {}; generators must have degree >= 2",
                    name, degree
                )));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::validation(format!("duplicate generator name {}", name)));
            }
        }
        let sig = Arc::new(Signature::new(gens));
        if diff.len() != sig.len() {
            return Err(Error::validation(format!(
                "differential assigns {} images to {} generators",
                diff.len(),
                sig.len()
            )));
        }
        for img in &diff {
            if img.sig_fp() != sig.fingerprint() {
                return Err(Error::DomainMismatch);
            }
        }
        Ok(SullivanAlgebra { sig, diff })
    }

    /// Convenience constructor from string differentials given as
    /// (coefficient, [(name, exp)...]) term lists.
    pub fn build(
        gens: &[(&str, u64)],
        diff: &[(&str, &[(Q, &[(&str, u32)])])],
    ) -> Result<Self> {
        let roster: Vec<(String, u64)> = gens.iter().map(|(n, d)| (n.to_string(), *d)).collect();
        let sig = Signature::new(roster.clone());
        let mut images = vec![Element::zero(&sig); sig.len()];
        for (name, terms) in diff {
            let g = sig
                .index_of(name)
                .ok_or_else(|| Error::validation(format!("unknown generator {}", name)))?;
            let mut e = Element::zero(&sig);
            for (c, factors) in terms.iter() {
                let pairs: Option<Vec<(u32, u32)>> = factors
                    .iter()
                    .map(|(n, ex)| sig.index_of(n).map(|i| (i, *ex)))
                    .collect();
                let pairs =
                    pairs.ok_or_else(|| Error::validation("unknown generator in differential"))?;
                let m = Monomial::new(&sig, &pairs)
                    .ok_or_else(|| Error::validation("odd generator squared in differential"))?;
                e.add_term(m, c.clone());
            }
            images[g as usize] = e;
        }
        SullivanAlgebra::new(roster, images)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn sig_arc(&self) -> Arc<Signature> {
        Arc::clone(&self.sig)
    }

    pub fn gen_count(&self) -> usize {
        self.sig.len()
    }

    pub fn d_of(&self, g: u32) -> &Element<Q> {
        &self.diff[g as usize]
    }

    pub fn generator(&self, g: u32) -> Element<Q> {
        Element::generator(&self.sig, g)
    }

    pub fn by_name(&self, name: &str) -> Result<Element<Q>> {
        let g = self
            .sig
            .index_of(name)
            .ok_or_else(|| Error::validation(format!("unknown generator {}", name)))?;
        Ok(self.generator(g))
    }

    pub fn zero(&self) -> Element<Q> {
        Element::zero(&self.sig)
    }

    /// Extend the stored generator assignment to a degree +1 derivation:
    /// linear, and on a product d(ab) = d(a)b + (-1)^{deg a} a d(b).
    /// Works over any coefficient ring by lifting the rational images.
    pub fn differentiate<C: Ring>(&self, e: &Element<C>) -> Result<Element<C>> {
        if e.sig_fp() != self.sig.fingerprint() {
            return Err(Error::DomainMismatch);
        }
        let sig = &*self.sig;
        let mut out = Element::zero(sig);
        for (m, c) in e.terms() {
            let factors = m.factors().to_vec();
            let mut prefix_odd = 0u32;
            for (pos, &(g, exp)) in factors.iter().enumerate() {
                let dg = &self.diff[g as usize];
                if !dg.is_zero() {
                    // (-1)^{|prefix|} * exp * prefix g^{exp-1} * dg * suffix
                    let mut rest_pairs: Vec<(u32, u32)> = Vec::with_capacity(factors.len());
                    rest_pairs.extend_from_slice(&factors[..pos]);
                    if exp > 1 {
                        rest_pairs.push((g, exp - 1));
                    }
                    let prefix_m = Monomial::new(sig, &rest_pairs)
                        .expect("reduced exponents stay legal");
                    let suffix_m = Monomial::new(sig, &factors[pos + 1..])
                        .expect("suffix of a legal monomial is legal");
                    let mut k = qi(exp as i64);
                    if prefix_odd % 2 == 1 {
                        k = -k;
                    }
                    let coeff = c.mul_ref(&C::from_q(&k));
                    let lhs = Element::monomial(sig, prefix_m, coeff);
                    let lifted: Element<C> = dg.lift();
                    let mid = lhs.mul(&lifted, sig)?;
                    let rhs = Element::monomial(sig, suffix_m, C::one());
                    let term = mid.mul(&rhs, sig)?;
                    out = out.add(&term)?;
                }
                if self.sig.is_odd(g) {
                    prefix_odd += exp;
                }
            }
        }
        Ok(out)
    }

    /// All monomials of total degree `k`, complete and duplicate-free, in
    /// the canonical order. Enumeration beyond `budgets.monomial_cap` is a
    /// resource error.
    pub fn basis_of_degree(&self, k: u64, budgets: &Budgets) -> Result<Vec<Monomial>> {
        let mut out: Vec<Monomial> = Vec::new();
        let n = self.sig.len() as u32;
        let mut stack: Vec<(u32, u32)> = Vec::new();
        self.enumerate(0, n, k, &mut stack, &mut out, budgets.monomial_cap)?;
        out.sort();
        Ok(out)
    }

    fn enumerate(
        &self,
        g: u32,
        n: u32,
        remaining: u64,
        stack: &mut Vec<(u32, u32)>,
        out: &mut Vec<Monomial>,
        cap: usize,
    ) -> Result<()> {
        if remaining == 0 {
            if out.len() >= cap {
                return Err(Error::resource("monomials in one degree", cap));
            }
            out.push(Monomial::new(&self.sig, stack).expect("stack respects parity"));
            return Ok(());
        }
        if g == n {
            return Ok(());
        }
        let d = self.sig.degree(g);
        let max_e = if self.sig.is_odd(g) { 1 } else { (remaining / d) as u32 };
        for e in (0..=max_e).rev() {
            let used = d * e as u64;
            if used > remaining {
                continue;
            }
            if e > 0 {
                stack.push((g, e));
            }
            self.enumerate(g + 1, n, remaining - used, stack, out, cap)?;
            if e > 0 {
                stack.pop();
            }
        }
        Ok(())
    }

    /// Seeded random homogeneous element of the given degree: a sparse
    /// rational combination of basis monomials. Used by the law suites.
    pub fn random_homogeneous(
        &self,
        degree: u64,
        rng: &mut impl Rng,
        max_terms: usize,
        budgets: &Budgets,
    ) -> Result<Element<Q>> {
        let basis = self.basis_of_degree(degree, budgets)?;
        let mut e = self.zero();
        if basis.is_empty() {
            return Ok(e);
        }
        let terms = rng.gen_range(1..=max_terms);
        for _ in 0..terms {
            let m = basis[rng.gen_range(0..basis.len())].clone();
            let num = rng.gen_range(-6i64..=6);
            let den = rng.gen_range(1i64..=4);
            e.add_term(m, crate::ring::q(num, den));
        }
        Ok(e)
    }
}

/// Outcome of one structural check; failures are report entries, never
/// exceptions.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct StructureReport {
    /// d image of each degree-r generator is homogeneous of degree r+1.
    pub degree_homogeneous: bool,
    /// d(generator) lies in the subalgebra on strictly lower-degree generators.
    pub lower_degree: bool,
    /// d composed with d vanishes on every generator.
    pub d_squared_zero: bool,
    /// No differential image has a linear part.
    pub minimal: bool,
    /// Human-readable findings for each failed check.
    pub findings: Vec<String>,
}

impl StructureReport {
    pub fn all_pass(&self) -> bool {
        self.degree_homogeneous && self.lower_degree && self.d_squared_zero && self.minimal
    }

    pub fn sullivan_ok(&self) -> bool {
        self.degree_homogeneous && self.lower_degree && self.d_squared_zero
    }
}

/// Verify the Sullivan conditions and minimality, each independently.
pub fn check_structure(alg: &SullivanAlgebra) -> StructureReport {
    let sig = alg.sig();
    let mut report = StructureReport {
        degree_homogeneous: true,
        lower_degree: true,
        d_squared_zero: true,
        minimal: true,
        findings: Vec::new(),
    };
    for g in 0..sig.len() as u32 {
        let name = sig.name(g);
        let dg = alg.d_of(g);
        match dg.homogeneous_degree() {
            Homogeneity::Zero => {}
            Homogeneity::Degree(k) if k == sig.degree(g) + 1 => {}
            other => {
                report.degree_homogeneous = false;
                report.findings.push(format!(
                    "d({}) is not homogeneous of degree {} (found {:?})",
                    name,
                    sig.degree(g) + 1,
                    other
                ));
            }
        }
        for (m, _) in dg.terms() {
            if m.factors().iter().any(|&(h, _)| sig.degree(h) >= sig.degree(g)) {
                report.lower_degree = false;
                report.findings.push(format!(
                    "d({}) uses a generator of degree >= {}",
                    name,
                    sig.degree(g)
                ));
                break;
            }
        }
        match alg.differentiate(dg) {
            Ok(dd) if dd.is_zero() => {}
            Ok(_) => {
                report.d_squared_zero = false;
                report.findings.push(format!("d(d({})) != 0", name));
            }
            Err(e) => {
                report.d_squared_zero = false;
                report.findings.push(format!("d(d({})) failed: {}", name, e));
            }
        }
        if dg.terms().any(|(m, _)| m.is_linear()) {
            report.minimal = false;
            report.findings.push(format!("d({}) has a linear part", name));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::q;

    /// The two-generator model Lambda(a2, b3), d(b) = a^2.
    pub fn sphere2() -> SullivanAlgebra {
        SullivanAlgebra::build(
            &[("a", 2), ("b", 3)],
            &[("b", &[(qi(1), &[("a", 2)])])],
        )
        .unwrap()
    }

    #[test]
    fn sphere_model_checks_out() {
        let alg = sphere2();
        let rep = check_structure(&alg);
        assert!(rep.all_pass(), "{:?}", rep.findings);
    }

    #[test]
    fn differentiate_leibniz_example() {
        // d(a*b) = d(a)b + a d(b) = a^3 for the sphere model.
        let alg = sphere2();
        let a = alg.by_name("a").unwrap();
        let b = alg.by_name("b").unwrap();
        let ab = a.mul(&b, alg.sig()).unwrap();
        let d = alg.differentiate(&ab).unwrap();
        let a3 = a.pow(3, alg.sig()).unwrap();
        assert_eq!(d, a3);
    }

    #[test]
    fn degree_mismatch_flagged() {
        // d(b) = a has the wrong degree (3 -> 2 instead of 4).
        let alg = SullivanAlgebra::build(
            &[("a", 2), ("b", 3)],
            &[("b", &[(qi(1), &[("a", 1)])])],
        )
        .unwrap();
        let rep = check_structure(&alg);
        assert!(!rep.degree_homogeneous);
        assert!(!rep.minimal);
    }

    #[test]
    fn basis_enumeration_small() {
        let alg = sphere2();
        let b4 = alg.basis_of_degree(4, &Budgets::default()).unwrap();
        // degree 4: a^2 only
        assert_eq!(b4.len(), 1);
        let b5 = alg.basis_of_degree(5, &Budgets::default()).unwrap();
        // degree 5: a*b
        assert_eq!(b5.len(), 1);
        let b7 = alg.basis_of_degree(7, &Budgets::default()).unwrap();
        assert_eq!(b7.len(), 1); // a^2 b
        let b1 = alg.basis_of_degree(1, &Budgets::default()).unwrap();
        assert!(b1.is_empty());
    }

    #[test]
    fn rejects_low_degree_generators() {
        assert!(SullivanAlgebra::build(&[("t", 1)], &[]).is_err());
        assert!(SullivanAlgebra::build(&[("t", 0)], &[]).is_err());
    }

    #[test]
    fn random_elements_differentiate_to_zero_twice() {
        use rand::SeedableRng;
        let alg = sphere2();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let deg = rng.gen_range(2u64..12);
            let e = alg.random_homogeneous(deg, &mut rng, 3, &Budgets::default()).unwrap();
            let dd = alg.differentiate(&alg.differentiate(&e).unwrap()).unwrap();
            assert!(dd.is_zero());
        }
    }

    #[test]
    fn rational_coefficients_stay_exact() {
        let alg = sphere2();
        let a = alg.by_name("a").unwrap();
        let x = a.scale(&q(1, 3));
        let y = x.scale(&qi(3));
        assert_eq!(y, a);
    }
}
