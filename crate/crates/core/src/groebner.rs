//! Buchberger's algorithm over the rationals with the sugar selection
//! strategy and the product/chain pair criteria, in the graded
//! reverse-lexicographic order. Sized for the sparse near-monomial ideals
//! that arise from pure differentials; a pair budget turns runaway inputs
//! into explicit resource errors.

use std::collections::BTreeMap;

use crate::budget::Budgets;
use crate::error::Error;
use crate::mpoly::{MPoly, PMonomial};
use crate::ring::Q;
use crate::Result;

/// Reduce `f` modulo `basis` (full multivariate division, every term).
pub fn reduce(f: &MPoly, basis: &[MPoly]) -> MPoly {
    let mut rem = MPoly::zero();
    let mut work = f.clone();
    'outer: while let Some((lm, lc)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
        for g in basis {
            if let Some((gm, gc)) = g.leading() {
                if gm.divides(&lm) {
                    let qm = lm.div(gm).expect("divisibility checked");
                    let qc = &lc / gc;
                    work = work.sub(&g.mul_term(&qm, &qc));
                    continue 'outer;
                }
            }
        }
        // Leading term irreducible: move it to the remainder.
        rem.add_term(lm.clone(), lc.clone());
        let mut single = MPoly::zero();
        single.add_term(lm, lc);
        work = work.sub(&single);
    }
    rem
}

fn s_poly(f: &MPoly, g: &MPoly) -> MPoly {
    let (fm, fc) = f.leading().expect("nonzero");
    let (gm, gc) = g.leading().expect("nonzero");
    let l = fm.lcm(gm);
    let uf = l.div(fm).unwrap();
    let ug = l.div(gm).unwrap();
    let one = Q::from_integer(1.into());
    f.mul_term(&uf, &(&one / fc)).sub(&g.mul_term(&ug, &(&one / gc)))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    sugar: u64,
    lcm: PMonomial,
    i: usize,
    j: usize,
}

/// Compute a reduced Groebner basis of the ideal generated by `gens`.
pub fn groebner_basis(gens: &[MPoly], budgets: &Budgets) -> Result<Vec<MPoly>> {
    let mut basis: Vec<MPoly> = Vec::new();
    let mut sugars: Vec<u64> = Vec::new();
    for g in gens {
        if !g.is_empty() {
            sugars.push(g.total_degree());
            basis.push(g.monic());
        }
    }
    let mut pairs: BTreeMap<PairKey, ()> = BTreeMap::new();
    let enqueue = |pairs: &mut BTreeMap<PairKey, ()>,
                       basis: &[MPoly],
                       sugars: &[u64],
                       i: usize,
                       j: usize| {
        let (fm, _) = basis[i].leading().unwrap();
        let (gm, _) = basis[j].leading().unwrap();
        // Product criterion: coprime leading monomials reduce to zero.
        if fm.is_coprime_with(gm) {
            return;
        }
        let lcm = fm.lcm(gm);
        let sugar = (sugars[i] + lcm.div(fm).unwrap().total_degree())
            .max(sugars[j] + lcm.div(gm).unwrap().total_degree());
        pairs.insert(PairKey { sugar, lcm, i, j }, ());
    };

    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            enqueue(&mut pairs, &basis, &sugars, i, j);
        }
    }

    let mut processed = 0usize;
    while let Some((key, ())) = pairs.pop_first() {
        processed += 1;
        if processed > budgets.groebner_pairs {
            return Err(Error::resource("Groebner S-pairs", budgets.groebner_pairs));
        }
        // Chain criterion: if some other basis element's LT divides the
        // lcm strictly between the two, the pair is redundant.
        let chain = basis.iter().enumerate().any(|(k, h)| {
            if k == key.i || k == key.j {
                return false;
            }
            let (hm, _) = h.leading().unwrap();
            hm.divides(&key.lcm)
                && hm.lcm(basis[key.i].leading().unwrap().0) != key.lcm
                && hm.lcm(basis[key.j].leading().unwrap().0) != key.lcm
        });
        if chain {
            continue;
        }
        let s = s_poly(&basis[key.i], &basis[key.j]);
        let r = reduce(&s, &basis);
        if r.is_empty() {
            continue;
        }
        let sugar = key.sugar.max(r.total_degree());
        basis.push(r.monic());
        sugars.push(sugar);
        let n = basis.len() - 1;
        for i in 0..n {
            enqueue(&mut pairs, &basis, &sugars, i, n);
        }
    }

    Ok(inter_reduce(basis))
}

fn inter_reduce(mut basis: Vec<MPoly>) -> Vec<MPoly> {
    // Drop elements whose leading monomial is divisible by another's.
    basis.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    let mut kept: Vec<MPoly> = Vec::new();
    for g in &basis {
        let gm = g.leading().unwrap().0;
        if !kept.iter().any(|h| h.leading().unwrap().0.divides(gm)) {
            kept.push(g.clone());
        }
    }
    // Fully reduce each kept element against the others.
    let mut out = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<MPoly> =
            kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, h)| h.clone()).collect();
        let r = reduce(&kept[i], &others);
        if !r.is_empty() {
            out.push(r.monic());
        }
    }
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    out
}

/// Smallest exponent e such that `var^e` lies in the leading-term ideal
/// of the (reduced) basis, if any. A pure power for every variable is
/// exactly finite-dimensionality of the quotient.
pub fn pure_power_in_lt(basis: &[MPoly], var: u32) -> Option<u32> {
    basis
        .iter()
        .filter_map(|g| {
            let (m, _) = g.leading()?;
            let (v, e) = m.single_variable()?;
            (v == var).then_some(e)
        })
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::qi;

    fn x(v: u32) -> MPoly {
        MPoly::var(v)
    }

    #[test]
    fn principal_ideal() {
        let gens = vec![x(0).pow(2)];
        let gb = groebner_basis(&gens, &Budgets::default()).unwrap();
        assert_eq!(gb.len(), 1);
        assert_eq!(pure_power_in_lt(&gb, 0), Some(2));
    }

    #[test]
    fn classic_two_generator_example() {
        // I = (x^2 - y, x^3 - x): GB contains y-polynomials; quotient is
        // finite dimensional over Q (variety is finite).
        let gens = vec![x(0).pow(2).sub(&x(1)), x(0).pow(3).sub(&x(0))];
        let gb = groebner_basis(&gens, &Budgets::default()).unwrap();
        // x^3 - x reduces to x*y - x given x^2 - y; closure brings y^2 - y.
        assert!(pure_power_in_lt(&gb, 0).is_some() || pure_power_in_lt(&gb, 1).is_some());
        // Membership: x^4 - x^2 must reduce to zero.
        let f = x(0).pow(4).sub(&x(0).pow(2));
        assert!(reduce(&f, &gb).is_empty());
    }

    #[test]
    fn pure_powers_appear_for_zero_dimensional_ideal() {
        // I = (x^2 + y^2 - 1, x - y): zero-dimensional, both variables get
        // pure powers in LT after elimination... LT ideal contains x and y^2.
        let gens = vec![
            x(0).pow(2).add(&x(1).pow(2)).sub(&MPoly::constant(qi(1))),
            x(0).sub(&x(1)),
        ];
        let gb = groebner_basis(&gens, &Budgets::default()).unwrap();
        assert!(pure_power_in_lt(&gb, 0).is_some());
        assert!(pure_power_in_lt(&gb, 1).is_some());
    }

    #[test]
    fn infinite_quotient_has_no_pure_power() {
        // I = (x*y): neither x nor y has a pure power in LT(I).
        let gens = vec![x(0).mul(&x(1))];
        let gb = groebner_basis(&gens, &Budgets::default()).unwrap();
        assert_eq!(pure_power_in_lt(&gb, 0), None);
        assert_eq!(pure_power_in_lt(&gb, 1), None);
    }

    #[test]
    fn budget_error_is_loud() {
        let tight = Budgets { groebner_pairs: 1, ..Budgets::default() };
        let gens = vec![
            x(0).pow(3).sub(&x(1).pow(2)),
            x(0).pow(2).mul(&x(2)).sub(&x(1).mul(&x(2)).add(&x(0))),
            x(1).pow(3).sub(&x(2).pow(2)),
        ];
        match groebner_basis(&gens, &tight) {
            Err(Error::Resource { .. }) => {}
            other => panic!("expected resource error, got {:?}", other.map(|v| v.len())),
        }
    }
}
