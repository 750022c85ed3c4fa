use std::collections::BTreeMap;

use crate::algebra::SullivanAlgebra;
use crate::budget::Budgets;
use crate::element::{Element, Homogeneity};
use crate::error::Error;
use crate::linalg::{Echelon, SparseMat};
use crate::monomial::Monomial;
use crate::ring::Q;
use crate::Result;

/// Answer of [`solve_exactness`]: either a preimage with d(preimage) = e,
/// or a certified refusal.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactnessAnswer {
    Exact { preimage: Element<Q> },
    NotExact { reason: NotExactReason },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotExactReason {
    /// d(e) != 0, so e cannot be a boundary.
    NotClosed,
    /// e is closed but outside the image of d.
    NoPreimage,
}

impl ExactnessAnswer {
    pub fn preimage(&self) -> Option<&Element<Q>> {
        match self {
            ExactnessAnswer::Exact { preimage } => Some(preimage),
            ExactnessAnswer::NotExact { .. } => None,
        }
    }
}

/// The differential from degree `k-1` to degree `k` as a sparse matrix
/// over the canonical bases, kept factorized so repeated exactness
/// queries in the same degree are cheap.
#[derive(Debug)]
pub struct BoundarySolver {
    pub degree: u64,
    domain: Vec<Monomial>,
    codomain_index: BTreeMap<Monomial, usize>,
    codomain_len: usize,
    echelon: Echelon,
}

impl BoundarySolver {
    /// Build the solver for boundaries landing in degree `k`.
    pub fn new(alg: &SullivanAlgebra, k: u64, budgets: &Budgets) -> Result<Self> {
        let domain = if k == 0 { Vec::new() } else { alg.basis_of_degree(k - 1, budgets)? };
        let codomain = alg.basis_of_degree(k, budgets)?;
        let codomain_index: BTreeMap<Monomial, usize> =
            codomain.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = SparseMat::new(codomain.len(), domain.len());
        for (j, m) in domain.iter().enumerate() {
            let dm = alg.differentiate(&Element::monomial(alg.sig(), m.clone(), Q::from_integer(1.into())))?;
            for (tm, c) in dm.terms() {
                let i = *codomain_index
                    .get(tm)
                    .ok_or_else(|| Error::internal("differential left the enumerated basis"))?;
                mat.set(i, j, c.clone());
            }
        }
        Ok(BoundarySolver {
            degree: k,
            domain,
            codomain_index,
            codomain_len: codomain.len(),
            echelon: Echelon::new(&mat),
        })
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn domain_dim(&self) -> usize {
        self.domain.len()
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_len
    }

    /// Solve d(p) = e for a homogeneous `e` of this solver's degree.
    pub fn preimage(&self, alg: &SullivanAlgebra, e: &Element<Q>) -> Result<Option<Element<Q>>> {
        let mut rhs = vec![Q::from_integer(0.into()); self.codomain_len];
        for (m, c) in e.terms() {
            match self.codomain_index.get(m) {
                Some(&i) => rhs[i] = c.clone(),
                None => return Err(Error::internal("element outside enumerated basis")),
            }
        }
        match self.echelon.solve(&rhs) {
            None => Ok(None),
            Some(x) => {
                let mut p = alg.zero();
                for (j, coeff) in x.into_iter().enumerate() {
                    if !num::Zero::is_zero(&coeff) {
                        p.add_term(self.domain[j].clone(), coeff);
                    }
                }
                Ok(Some(p))
            }
        }
    }
}

/// Decide whether `e` is a boundary, returning a preimage when it is.
/// Closedness is checked first: a non-closed element is never exact.
pub fn solve_exactness(
    alg: &SullivanAlgebra,
    e: &Element<Q>,
    budgets: &Budgets,
) -> Result<ExactnessAnswer> {
    let degree = match e.homogeneous_degree() {
        Homogeneity::Zero => {
            return Ok(ExactnessAnswer::Exact { preimage: alg.zero() });
        }
        Homogeneity::Degree(k) => k,
        Homogeneity::Mixed => {
            return Err(Error::precondition("solve_exactness requires a homogeneous element"));
        }
    };
    if !alg.differentiate(e)?.is_zero() {
        return Ok(ExactnessAnswer::NotExact { reason: NotExactReason::NotClosed });
    }
    let solver = BoundarySolver::new(alg, degree, budgets)?;
    match solver.preimage(alg, e)? {
        Some(p) => {
            debug_assert_eq!(alg.differentiate(&p)?, *e);
            Ok(ExactnessAnswer::Exact { preimage: p })
        }
        None => Ok(ExactnessAnswer::NotExact { reason: NotExactReason::NoPreimage }),
    }
}

/// dim H^k = dim ker(d_k) - dim im(d_{k-1}), by exact rank computation.
pub fn cohomology_dim(alg: &SullivanAlgebra, k: u64, budgets: &Budgets) -> Result<usize> {
    let into_k = BoundarySolver::new(alg, k, budgets)?;
    let out_of_k = BoundarySolver::new(alg, k + 1, budgets)?;
    let dim_k = into_k.codomain_dim();
    let kernel = dim_k - out_of_k.rank();
    Ok(kernel - into_k.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SullivanAlgebra;
    use crate::ring::qi;

    fn sphere2() -> SullivanAlgebra {
        SullivanAlgebra::build(&[("a", 2), ("b", 3)], &[("b", &[(qi(1), &[("a", 2)])])]).unwrap()
    }

    #[test]
    fn sphere_cohomology() {
        // Classical 2-sphere model: H = Q in degrees 0 and 2, nothing else
        // through degree 6.
        let alg = sphere2();
        let b = Budgets::default();
        let dims: Vec<usize> = (0..=6).map(|k| cohomology_dim(&alg, k, &b).unwrap()).collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn odd_generator_no_differential() {
        let alg = SullivanAlgebra::build(&[("w", 3)], &[]).unwrap();
        assert_eq!(cohomology_dim(&alg, 3, &Budgets::default()).unwrap(), 1);
    }

    #[test]
    fn exactness_on_sphere() {
        let alg = sphere2();
        let b = Budgets::default();
        let a = alg.by_name("a").unwrap();
        let a2 = a.pow(2, alg.sig()).unwrap();
        match solve_exactness(&alg, &a2, &b).unwrap() {
            ExactnessAnswer::Exact { preimage } => {
                assert_eq!(alg.differentiate(&preimage).unwrap(), a2);
            }
            other => panic!("a^2 should be exact, got {:?}", other),
        }
        // a itself is closed but not exact.
        assert_eq!(
            solve_exactness(&alg, &a, &b).unwrap(),
            ExactnessAnswer::NotExact { reason: NotExactReason::NoPreimage }
        );
        // b is not closed.
        let bel = alg.by_name("b").unwrap();
        assert_eq!(
            solve_exactness(&alg, &bel, &b).unwrap(),
            ExactnessAnswer::NotExact { reason: NotExactReason::NotClosed }
        );
    }
}
