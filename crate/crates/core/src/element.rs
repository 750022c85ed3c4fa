use std::collections::BTreeMap;

use crate::error::Error;
use crate::monomial::{Monomial, Signature};
use crate::ring::{Ring, Q};
use crate::Result;

/// A finite formal sum of monomials with nonzero coefficients in `C`.
///
/// `C` is [`Q`] for ordinary elements and [`crate::mpoly::MPoly`] for
/// morphism templates whose coefficients are unknowns. Zero coefficients
/// are never stored, so equality is plain map comparison. The signature
/// fingerprint pins the generator universe; mixing universes is a
/// [`Error::DomainMismatch`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element<C: Ring = Q> {
    sig_fp: u64,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> Element<C> {
    pub fn zero(sig: &Signature) -> Self {
        Element { sig_fp: sig.fingerprint(), terms: BTreeMap::new() }
    }

    pub fn from_terms(sig: &Signature, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut e = Self::zero(sig);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn monomial(sig: &Signature, m: Monomial, c: C) -> Self {
        Self::from_terms(sig, [(m, c)])
    }

    pub fn scalar(sig: &Signature, c: C) -> Self {
        Self::monomial(sig, Monomial::one(), c)
    }

    pub fn generator(sig: &Signature, g: u32) -> Self {
        Self::monomial(sig, Monomial::generator(sig, g), C::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn sig_fp(&self) -> u64 {
        self.sig_fp
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn check_same_universe(&self, other: &Element<C>) -> Result<()> {
        if self.sig_fp != other.sig_fp {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Element<C>) -> Result<Element<C>> {
        self.check_same_universe(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element<C>) -> Result<Element<C>> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element<C> {
        Element {
            sig_fp: self.sig_fp,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Element<C> {
        if c.is_zero() {
            return Element { sig_fp: self.sig_fp, terms: BTreeMap::new() };
        }
        let mut out = Element { sig_fp: self.sig_fp, terms: BTreeMap::new() };
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k.mul_ref(c));
        }
        out
    }

    /// Bilinear product with the Koszul sign convention.
    pub fn mul(&self, other: &Element<C>, sig: &Signature) -> Result<Element<C>> {
        self.check_same_universe(other)?;
        debug_assert_eq!(self.sig_fp, sig.fingerprint());
        let mut out = Self::zero(sig);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, sign)) = ma.mul(mb, sig) {
                    let mut c = ca.mul_ref(cb);
                    if sign < 0 {
                        c = c.neg_ref();
                    }
                    out.add_term(m, c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32, sig: &Signature) -> Result<Element<C>> {
        let mut out = Self::scalar(sig, C::one());
        for _ in 0..e {
            out = out.mul(self, sig)?;
        }
        Ok(out)
    }

    /// The common degree of all monomials, if the element is homogeneous.
    /// The zero element is homogeneous of every degree (`Some(None)` is
    /// not used; zero reports `Homogeneity::Zero`).
    pub fn homogeneous_degree(&self) -> Homogeneity {
        let mut it = self.terms.keys();
        match it.next() {
            None => Homogeneity::Zero,
            Some(first) => {
                let d = first.degree();
                if it.all(|m| m.degree() == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::Mixed
                }
            }
        }
    }

    /// True when the element is zero or concentrated in degree `d`.
    pub fn is_homogeneous_of(&self, d: u64) -> bool {
        match self.homogeneous_degree() {
            Homogeneity::Zero => true,
            Homogeneity::Degree(k) => k == d,
            Homogeneity::Mixed => false,
        }
    }

    pub fn map_coefficients<D: Ring>(&self, f: impl Fn(&C) -> D) -> Element<D> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                terms.insert(m.clone(), d);
            }
        }
        Element { sig_fp: self.sig_fp, terms }
    }

    pub fn show(&self, sig: &Signature) -> String
    where
        C: std::fmt::Display,
    {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (sign, body) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&m.show(sig));
            } else {
                out.push_str(&format!("{}*{}", body, m.show(sig)));
            }
        }
        out
    }
}

impl Element<Q> {
    /// Lift rational coefficients into any ring `C`.
    pub fn lift<C: Ring>(&self) -> Element<C> {
        self.map_coefficients(|q| C::from_q(q))
    }
}

/// Answer of [`Element::homogeneous_degree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(u64),
    Mixed,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Signature;
    use crate::ring::qi;

    fn sig() -> Signature {
        Signature::new(vec![("a".into(), 2), ("b".into(), 3)])
    }

    #[test]
    fn add_cancels_to_zero() {
        let s = sig();
        let a = Element::<Q>::generator(&s, 0);
        let sum = a.add(&a.neg()).unwrap();
        assert!(sum.is_zero());
        assert_eq!(sum.homogeneous_degree(), Homogeneity::Zero);
    }

    #[test]
    fn product_of_odds_anticommutes() {
        let s = Signature::new(vec![("u".into(), 3), ("v".into(), 5)]);
        let u = Element::<Q>::generator(&s, 0);
        let v = Element::<Q>::generator(&s, 1);
        let uv = u.mul(&v, &s).unwrap();
        let vu = v.mul(&u, &s).unwrap();
        assert_eq!(uv, vu.neg());
        assert!(u.mul(&u, &s).unwrap().is_zero());
    }

    #[test]
    fn domain_mismatch_detected() {
        let s1 = sig();
        let s2 = Signature::new(vec![("a".into(), 2), ("b".into(), 5)]);
        let a = Element::<Q>::generator(&s1, 0);
        let b = Element::<Q>::generator(&s2, 0);
        assert!(matches!(a.add(&b), Err(Error::DomainMismatch)));
    }

    #[test]
    fn homogeneity() {
        let s = sig();
        let a = Element::generator(&s, 0); // degree 2
        let b = Element::generator(&s, 1); // degree 3
        let mixed = a.add(&b).unwrap();
        assert_eq!(mixed.homogeneous_degree(), Homogeneity::Mixed);
        let sq = a.mul(&a, &s).unwrap();
        assert_eq!(sq.homogeneous_degree(), Homogeneity::Degree(4));
        assert_eq!(sq.coefficient(&Monomial::new(&s, &[(0, 2)]).unwrap()), Some(&qi(1)));
    }
}
