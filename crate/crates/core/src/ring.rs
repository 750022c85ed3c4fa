use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Exact rational scalar used everywhere in the kernel.
pub type Q = BigRational;
pub type Z = BigInt;

/// Minimal commutative-ring interface over which the graded algebra is
/// generic. Implemented by [`Q`] (the usual case) and by
/// [`crate::mpoly::MPoly`] so that morphism templates with unknown
/// coefficients can be expanded with the same kernel code.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn from_q(q: &Q) -> Self;

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
    fn from_i64(n: i64) -> Self {
        Self::from_q(&qi(n))
    }
}

impl Ring for Q {
    fn zero() -> Self {
        <Q as Zero>::zero()
    }
    fn one() -> Self {
        <Q as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
}

/// Rational from an integer.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational from numerator and denominator.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parse a rational written as `n` or `n/d`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Q::from_integer(n))
        }
    }
}

/// Render a rational as `n` or `n/d`.
pub fn show_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact k-th root of a rational if one exists. For even k the
/// non-negative root is returned.
pub fn nth_root_q(x: &Q, k: u32) -> Option<Q> {
    if k == 0 {
        return None;
    }
    if x.is_negative() && k % 2 == 0 {
        return None;
    }
    let num = nth_root_z(x.numer(), k)?;
    let den = nth_root_z(x.denom(), k)?;
    Some(Q::new(num, den))
}

fn nth_root_z(x: &Z, k: u32) -> Option<Z> {
    let neg = x.is_negative();
    let a = x.abs();
    let r = a.nth_root(k);
    if num::pow::pow(r.clone(), k as usize) != a {
        return None;
    }
    Some(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_show() {
        assert_eq!(parse_q("3/2").unwrap(), q(3, 2));
        assert_eq!(parse_q("-7").unwrap(), qi(-7));
        assert_eq!(show_q(&q(-3, 2)), "-3/2");
        assert_eq!(show_q(&qi(5)), "5");
        assert!(parse_q("1/0").is_none());
    }

    #[test]
    fn roots() {
        assert_eq!(nth_root_q(&qi(-8), 3).unwrap(), qi(-2));
        assert_eq!(nth_root_q(&q(27, 8), 3).unwrap(), q(3, 2));
        assert!(nth_root_q(&qi(2), 2).is_none());
        assert!(nth_root_q(&qi(-4), 2).is_none());
        assert_eq!(nth_root_q(&qi(1), 15).unwrap(), qi(1));
    }
}
