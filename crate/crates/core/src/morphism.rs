use std::sync::Arc;

use crate::algebra::SullivanAlgebra;
use crate::element::Element;
use crate::error::Error;
use crate::monomial::Signature;
use crate::ring::{Ring, Q};
use crate::Result;

/// A degree-preserving algebra morphism given by generator images.
/// Commutation with the differentials is checked by
/// [`Morphism::is_dga_morphism`], not enforced at construction.
#[derive(Debug, Clone)]
pub struct Morphism {
    source: Arc<SullivanAlgebra>,
    target: Arc<SullivanAlgebra>,
    images: Vec<Element<Q>>,
}

impl Morphism {
    pub fn new(
        source: Arc<SullivanAlgebra>,
        target: Arc<SullivanAlgebra>,
        images: Vec<Element<Q>>,
    ) -> Result<Self> {
        if images.len() != source.gen_count() {
            return Err(Error::validation(format!(
                "morphism assigns {} images to {} generators",
                images.len(),
                source.gen_count()
            )));
        }
        for (g, img) in images.iter().enumerate() {
            if img.sig_fp() != target.sig().fingerprint() {
                return Err(Error::DomainMismatch);
            }
            let want = source.sig().degree(g as u32);
            if !img.is_homogeneous_of(want) {
                return Err(Error::validation(format!(
                    "image of {} is not homogeneous of degree {}",
                    source.sig().name(g as u32),
                    want
                )));
            }
        }
        Ok(Morphism { source, target, images })
    }

    /// The identity endomorphism.
    pub fn identity(alg: Arc<SullivanAlgebra>) -> Self {
        let images = (0..alg.gen_count() as u32).map(|g| alg.generator(g)).collect();
        Morphism { source: Arc::clone(&alg), target: alg, images }
    }

    pub fn source(&self) -> &Arc<SullivanAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SullivanAlgebra> {
        &self.target
    }

    pub fn image_of(&self, g: u32) -> &Element<Q> {
        &self.images[g as usize]
    }

    pub fn images(&self) -> &[Element<Q>] {
        &self.images
    }

    /// Replace the image of one generator (returns a new morphism).
    pub fn with_image(&self, g: u32, img: Element<Q>) -> Result<Self> {
        let mut images = self.images.clone();
        images[g as usize] = img;
        Morphism::new(Arc::clone(&self.source), Arc::clone(&self.target), images)
    }

    /// Algebra-map extension of the generator assignment.
    pub fn apply(&self, e: &Element<Q>) -> Result<Element<Q>> {
        if e.sig_fp() != self.source.sig().fingerprint() {
            return Err(Error::DomainMismatch);
        }
        apply_images(&self.images, e, self.target.sig())
    }

    /// Check f(d g) = d(f g) on every generator, exactly.
    pub fn is_dga_morphism(&self) -> Result<bool> {
        for g in 0..self.source.gen_count() as u32 {
            let lhs = self.apply(self.source.d_of(g))?;
            let rhs = self.target.differentiate(&self.images[g as usize])?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// g after f (this = g). Requires target(f) = source(g).
    pub fn compose(&self, f: &Morphism) -> Result<Morphism> {
        if f.target.sig().fingerprint() != self.source.sig().fingerprint() {
            return Err(Error::DomainMismatch);
        }
        let images: Result<Vec<_>> = f.images.iter().map(|img| self.apply(img)).collect();
        Morphism::new(Arc::clone(&f.source), Arc::clone(&self.target), images?)
    }

    /// True when every generator maps to itself (source and target rosters
    /// agree).
    pub fn is_identity(&self) -> bool {
        self.source.sig() == self.target.sig()
            && (0..self.source.gen_count() as u32).all(|g| {
                self.images[g as usize] == self.target.generator(g)
            })
    }
}

/// Substitute generator images into an element: the multiplicative
/// extension of `images`, generic over the coefficient ring.
pub fn apply_images<C: Ring>(
    images: &[Element<C>],
    e: &Element<Q>,
    target_sig: &Signature,
) -> Result<Element<C>> {
    let mut out = Element::zero(target_sig);
    for (m, c) in e.terms() {
        let mut acc = Element::scalar(target_sig, C::from_q(c));
        for &(g, exp) in m.factors() {
            let img = &images[g as usize];
            let p = img.pow(exp, target_sig)?;
            acc = acc.mul(&p, target_sig)?;
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::qi;

    fn sphere() -> Arc<SullivanAlgebra> {
        Arc::new(
            SullivanAlgebra::build(&[("a", 2), ("b", 3)], &[("b", &[(qi(1), &[("a", 2)])])])
                .unwrap(),
        )
    }

    #[test]
    fn identity_is_dga() {
        let alg = sphere();
        let id = Morphism::identity(Arc::clone(&alg));
        assert!(id.is_dga_morphism().unwrap());
        assert!(id.is_identity());
    }

    #[test]
    fn doubling_map_commutes_with_d() {
        // f(a) = 2a, f(b) = 4b: d f(b) = 4a^2 = f(d b).
        let alg = sphere();
        let a = alg.by_name("a").unwrap();
        let b = alg.by_name("b").unwrap();
        let f = Morphism::new(
            Arc::clone(&alg),
            Arc::clone(&alg),
            vec![a.scale(&qi(2)), b.scale(&qi(4))],
        )
        .unwrap();
        assert!(f.is_dga_morphism().unwrap());
        // f(b) = 3b would not commute.
        let bad = f.with_image(1, b.scale(&qi(3))).unwrap();
        assert!(!bad.is_dga_morphism().unwrap());
    }

    #[test]
    fn composition_is_application() {
        let alg = sphere();
        let a = alg.by_name("a").unwrap();
        let b = alg.by_name("b").unwrap();
        let f = Morphism::new(
            Arc::clone(&alg),
            Arc::clone(&alg),
            vec![a.scale(&qi(2)), b.scale(&qi(4))],
        )
        .unwrap();
        let ff = f.compose(&f).unwrap();
        assert_eq!(*ff.image_of(0), a.scale(&qi(4)));
        assert_eq!(*ff.image_of(1), b.scale(&qi(16)));
        // apply(compose(g,f), e) = apply(g, apply(f, e))
        let e = a.mul(&b, alg.sig()).unwrap();
        assert_eq!(ff.apply(&e).unwrap(), f.apply(&f.apply(&e).unwrap()).unwrap());
    }

    #[test]
    fn degree_preservation_enforced() {
        let alg = sphere();
        let a = alg.by_name("a").unwrap();
        let r = Morphism::new(Arc::clone(&alg), Arc::clone(&alg), vec![a.clone(), a]);
        assert!(r.is_err());
    }
}
