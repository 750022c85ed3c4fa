use std::cmp::Ordering;
use std::fmt;

/// The generator roster of a free graded-commutative algebra: names and
/// degrees in index order. Signatures are compared structurally through a
/// fingerprint so values parsed twice from the same source interoperate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    names: Vec<String>,
    degrees: Vec<u64>,
    fp: u64,
}

impl Signature {
    pub fn new(gens: Vec<(String, u64)>) -> Self {
        let (names, degrees): (Vec<_>, Vec<_>) = gens.into_iter().unzip();
        let fp = fingerprint(&names, &degrees);
        Signature { names, degrees, fp }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: u32) -> &str {
        &self.names[i as usize]
    }

    pub fn degree(&self, i: u32) -> u64 {
        self.degrees[i as usize]
    }

    pub fn is_odd(&self, i: u32) -> bool {
        self.degrees[i as usize] % 2 == 1
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn fingerprint(&self) -> u64 {
        self.fp
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }
}

// FNV-1a over the roster; deterministic across runs and platforms.
fn fingerprint(names: &[String], degrees: &[u64]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |b: u8| {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    };
    for (n, d) in names.iter().zip(degrees) {
        for b in n.as_bytes() {
            eat(*b);
        }
        eat(0xff);
        for b in d.to_le_bytes() {
            eat(b);
        }
    }
    h
}

/// A monomial in the generators: factors sorted by generator index, with
/// odd generators carrying exponent exactly 1. The empty factor list is
/// the unit monomial of degree 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u64,
    factors: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { degree: 0, factors: Vec::new() }
    }

    /// Build from (generator, exponent) pairs; pairs need not be sorted.
    /// Returns `None` when an odd generator would acquire exponent > 1.
    pub fn new(sig: &Signature, pairs: &[(u32, u32)]) -> Option<Self> {
        let mut factors: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for &(g, e) in pairs {
            if e == 0 {
                continue;
            }
            match factors.iter_mut().find(|(h, _)| *h == g) {
                Some((_, old)) => *old += e,
                None => factors.push((g, e)),
            }
        }
        factors.sort_unstable_by_key(|&(g, _)| g);
        let mut degree = 0u64;
        for &(g, e) in &factors {
            if sig.is_odd(g) && e > 1 {
                return None;
            }
            degree += sig.degree(g) * e as u64;
        }
        Some(Monomial { degree, factors })
    }

    /// Single generator to the given power.
    pub fn power(sig: &Signature, g: u32, e: u32) -> Option<Self> {
        Self::new(sig, &[(g, e)])
    }

    pub fn generator(sig: &Signature, g: u32) -> Self {
        Self::power(sig, g, 1).expect("exponent 1 is always legal")
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn exponent_of(&self, g: u32) -> u32 {
        self.factors
            .iter()
            .find(|&&(h, _)| h == g)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// True when the monomial is a single generator with exponent 1 (the
    /// "linear part" test used by the minimality check).
    pub fn is_linear(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// Parity of the monomial's total degree.
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }

    /// Largest generator index used, if any.
    pub fn max_index(&self) -> Option<u32> {
        self.factors.last().map(|&(g, _)| g)
    }

    /// Product with the Koszul sign. Returns `None` when an odd generator
    /// appears in both operands (the square of an odd element is zero);
    /// otherwise the canonical product monomial and a sign +1/-1 counting
    /// the odd-odd transpositions needed to sort the concatenation.
    pub fn mul(&self, other: &Monomial, sig: &Signature) -> Option<(Monomial, i32)> {
        let mut swaps: u64 = 0;
        // Odd factors of self in ascending index order.
        let self_odd: Vec<u32> =
            self.factors.iter().filter(|&&(g, _)| sig.is_odd(g)).map(|&(g, _)| g).collect();
        for &(g, _) in other.factors.iter().filter(|&&(g, _)| sig.is_odd(g)) {
            if self_odd.binary_search(&g).is_ok() {
                return None;
            }
            // Moving g left past every odd factor of self with larger index.
            let pos = self_odd.partition_point(|&h| h < g);
            swaps += (self_odd.len() - pos) as u64;
        }

        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (ga, ea) = self.factors[i];
            let (gb, eb) = other.factors[j];
            match ga.cmp(&gb) {
                Ordering::Less => {
                    factors.push((ga, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push((gb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    factors.push((ga, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&self.factors[i..]);
        factors.extend_from_slice(&other.factors[j..]);

        let m = Monomial { degree: self.degree + other.degree, factors };
        Some((m, if swaps % 2 == 0 { 1 } else { -1 }))
    }

    /// Remove one power of generator `g`; `None` if absent.
    pub fn without_one(&self, g: u32, sig: &Signature) -> Option<Monomial> {
        let pos = self.factors.iter().position(|&(h, _)| h == g)?;
        let mut factors = self.factors.clone();
        if factors[pos].1 == 1 {
            factors.remove(pos);
        } else {
            factors[pos].1 -= 1;
        }
        Some(Monomial { degree: self.degree - sig.degree(g), factors })
    }

    pub fn show(&self, sig: &Signature) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.factors
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    sig.name(g).to_string()
                } else {
                    format!("{}^{}", sig.name(g), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Canonical order: by total degree, then lexicographic on exponent
/// vectors in generator-index order (higher exponent at the earliest
/// differing index compares greater). All bases, matrices and reports use
/// this order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.factors.get(i), other.factors.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(ga, ea)), Some(&(gb, eb))) => match ga.cmp(&gb) {
                        // Lower index present only on one side: that side has
                        // a positive exponent at the earliest differing slot.
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {
                            match ea.cmp(&eb) {
                                Ordering::Equal => {}
                                ord => return ord,
                            }
                            i += 1;
                            j += 1;
                        }
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(g, e)| if e == 1 { format!("g{}", g) } else { format!("g{}^{}", g, e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new(vec![
            ("x1".into(), 8),
            ("x2".into(), 10),
            ("y1".into(), 33),
            ("y2".into(), 35),
        ])
    }

    #[test]
    fn koszul_sign_odd_swap() {
        let s = sig();
        let y1 = Monomial::generator(&s, 2);
        let y2 = Monomial::generator(&s, 3);
        let (m12, s12) = y1.mul(&y2, &s).unwrap();
        let (m21, s21) = y2.mul(&y1, &s).unwrap();
        assert_eq!(m12, m21);
        assert_eq!(s12, 1);
        assert_eq!(s21, -1);
    }

    #[test]
    fn odd_square_is_none() {
        let s = sig();
        let y1 = Monomial::generator(&s, 2);
        assert!(y1.mul(&y1, &s).is_none());
        assert!(Monomial::new(&s, &[(2, 2)]).is_none());
    }

    #[test]
    fn even_generators_commute() {
        let s = sig();
        let x1 = Monomial::generator(&s, 0);
        let x2 = Monomial::generator(&s, 1);
        let (a, sa) = x1.mul(&x2, &s).unwrap();
        let (b, sb) = x2.mul(&x1, &s).unwrap();
        assert_eq!((a.clone(), sa), (b, sb));
        assert_eq!(sa, 1);
        assert_eq!(a.degree(), 18);
    }

    #[test]
    fn canonical_order_is_graded_then_lex() {
        let s = sig();
        let x1_sq = Monomial::new(&s, &[(0, 2)]).unwrap(); // degree 16
        let x2 = Monomial::generator(&s, 1); // degree 10
        assert!(x2 < x1_sq);
        // Same degree 40: x1^5 vs x2^4; x1^5 has the higher exponent at
        // the earlier index, so it compares greater.
        let a = Monomial::new(&s, &[(0, 5)]).unwrap();
        let b = Monomial::new(&s, &[(1, 4)]).unwrap();
        assert!(a > b);
    }
}
