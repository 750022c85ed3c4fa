//! JSON serialization of algebras and elements.
//!
//! The algebra document has a `generators` array ({name, degree} in index
//! order) and a `differential` object mapping generator name to an array
//! of terms `[numerator, denominator, [[name, exponent], ...]]` with the
//! integer parts as strings. Emission is canonical (keys sorted, terms in
//! the canonical monomial order), so emit-parse-emit is byte-stable.

use std::collections::BTreeMap;

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::SullivanAlgebra;
use crate::element::Element;
use crate::error::Error;
use crate::monomial::{Monomial, Signature};
use crate::ring::Q;
use crate::Result;

#[derive(Debug, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub generators: Vec<GeneratorDoc>,
    pub differential: BTreeMap<String, Vec<TermDoc>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub name: String,
    pub degree: u64,
}

/// One term: [numerator, denominator, [[generator, exponent], ...]].
pub type TermDoc = (String, String, Vec<(String, u32)>);

pub fn element_to_terms(e: &Element<Q>, sig: &Signature) -> Vec<TermDoc> {
    e.terms()
        .map(|(m, c)| {
            let factors = m
                .factors()
                .iter()
                .map(|&(g, ex)| (sig.name(g).to_string(), ex))
                .collect();
            (c.numer().to_string(), c.denom().to_string(), factors)
        })
        .collect()
}

pub fn element_from_terms(terms: &[TermDoc], sig: &Signature) -> Result<Element<Q>> {
    let mut e = Element::zero(sig);
    for (num, den, factors) in terms {
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::validation(format!("bad numerator {num}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::validation(format!("bad denominator {den}")))?;
        if den == BigInt::from(0) {
            return Err(Error::validation("zero denominator"));
        }
        let pairs: Result<Vec<(u32, u32)>> = factors
            .iter()
            .map(|(name, ex)| {
                sig.index_of(name)
                    .map(|g| (g, *ex))
                    .ok_or_else(|| Error::validation(format!("unknown generator {name}")))
            })
            .collect();
        let m = Monomial::new(sig, &pairs?)
            .ok_or_else(|| Error::validation("odd generator with exponent > 1"))?;
        e.add_term(m, Q::new(num, den));
    }
    Ok(e)
}

pub fn algebra_to_doc(alg: &SullivanAlgebra) -> AlgebraDoc {
    let sig = alg.sig();
    let generators = (0..sig.len() as u32)
        .map(|g| GeneratorDoc { name: sig.name(g).to_string(), degree: sig.degree(g) })
        .collect();
    let differential = (0..sig.len() as u32)
        .map(|g| (sig.name(g).to_string(), element_to_terms(alg.d_of(g), sig)))
        .collect();
    AlgebraDoc { generators, differential }
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<SullivanAlgebra> {
    let roster: Vec<(String, u64)> =
        doc.generators.iter().map(|g| (g.name.clone(), g.degree)).collect();
    let sig = Signature::new(roster.clone());
    let mut images = vec![Element::zero(&sig); sig.len()];
    for (name, terms) in &doc.differential {
        let g = sig
            .index_of(name)
            .ok_or_else(|| Error::validation(format!("differential names unknown generator {name}")))?;
        images[g as usize] = element_from_terms(terms, &sig)?;
    }
    SullivanAlgebra::new(roster, images)
}

pub fn algebra_to_json(alg: &SullivanAlgebra) -> String {
    serde_json::to_string_pretty(&algebra_to_doc(alg)).expect("algebra doc serializes")
}

pub fn algebra_from_json(s: &str) -> Result<SullivanAlgebra> {
    let doc: AlgebraDoc = serde_json::from_str(s)?;
    algebra_from_doc(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q, qi};

    #[test]
    fn round_trip_is_bit_exact() {
        let alg = SullivanAlgebra::build(
            &[("a", 2), ("b", 3)],
            &[("b", &[(q(-3, 2), &[("a", 2)])])],
        )
        .unwrap();
        let j1 = algebra_to_json(&alg);
        let back = algebra_from_json(&j1).unwrap();
        let j2 = algebra_to_json(&back);
        assert_eq!(j1, j2);
        assert_eq!(back.sig(), alg.sig());
        assert_eq!(back.d_of(1), alg.d_of(1));
    }

    #[test]
    fn element_terms_round_trip() {
        let alg = SullivanAlgebra::build(
            &[("a", 2), ("b", 3)],
            &[("b", &[(qi(1), &[("a", 2)])])],
        )
        .unwrap();
        let a = alg.by_name("a").unwrap();
        let b = alg.by_name("b").unwrap();
        let e = a.pow(3, alg.sig()).unwrap().scale(&q(7, 5)).add(&b.neg()).unwrap();
        let terms = element_to_terms(&e, alg.sig());
        let back = element_from_terms(&terms, alg.sig()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn malformed_documents_rejected() {
        assert!(algebra_from_json("{").is_err());
        let doc = r#"{"generators":[{"name":"a","degree":2}],"differential":{"zz":[]}}"#;
        assert!(algebra_from_json(doc).is_err());
    }
}
