use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::ring::{Ring, Q};

/// Monomial in commuting variables, sorted by variable index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PMonomial(Vec<(u32, u32)>);

impl PMonomial {
    pub fn one() -> Self {
        PMonomial(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        PMonomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        let mut m: BTreeMap<u32, u32> = BTreeMap::new();
        for &(v, e) in pairs {
            if e > 0 {
                *m.entry(v).or_insert(0) += e;
            }
        }
        PMonomial(m.into_iter().collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn exponent_of(&self, v: u32) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map(|&(_, e)| e).unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &PMonomial) -> PMonomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        PMonomial(out)
    }

    pub fn divides(&self, other: &PMonomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exponent_of(v) >= e)
    }

    pub fn div(&self, other: &PMonomial) -> Option<PMonomial> {
        if !other.divides(self) {
            return None;
        }
        let mut out = Vec::new();
        for &(v, e) in &self.0 {
            let r = e - other.exponent_of(v);
            if r > 0 {
                out.push((v, r));
            }
        }
        Some(PMonomial(out))
    }

    pub fn lcm(&self, other: &PMonomial) -> PMonomial {
        let mut m: BTreeMap<u32, u32> = self.0.iter().cloned().collect();
        for &(v, e) in &other.0 {
            let entry = m.entry(v).or_insert(0);
            *entry = (*entry).max(e);
        }
        PMonomial(m.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn gcd(&self, other: &PMonomial) -> PMonomial {
        let mut out = Vec::new();
        for &(v, e) in &self.0 {
            let f = other.exponent_of(v).min(e);
            if f > 0 {
                out.push((v, f));
            }
        }
        PMonomial(out)
    }

    pub fn is_coprime_with(&self, other: &PMonomial) -> bool {
        self.gcd(other).is_one()
    }

    /// Is this a pure power of a single variable (or 1)?
    pub fn single_variable(&self) -> Option<(u32, u32)> {
        if self.0.len() == 1 {
            Some(self.0[0])
        } else {
            None
        }
    }
}

/// Graded reverse-lexicographic order: higher total degree wins; on equal
/// degree, the monomial with the *smaller* exponent at the last differing
/// variable (highest index) is greater. With variables x0 > x1 > ... this
/// gives the classical x0^2 > x0 x1 > x1^2.
impl Ord for PMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (self.0.len(), other.0.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Greater, // other has trailing high-index vars
                (_, 0) => return Ordering::Less,
                _ => {
                    let (va, ea) = self.0[i - 1];
                    let (vb, eb) = other.0[j - 1];
                    match va.cmp(&vb) {
                        // Higher index present only on one side: that side
                        // has the larger exponent at the last slot, so it
                        // is grevlex-smaller.
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Equal => match ea.cmp(&eb) {
                            Ordering::Greater => return Ordering::Less,
                            Ordering::Less => return Ordering::Greater,
                            Ordering::Equal => {
                                i -= 1;
                                j -= 1;
                            }
                        },
                    }
                }
            }
        }
    }
}

impl PartialOrd for PMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact rational coefficients over an
/// indexed variable set. Terms are stored under the grevlex order, so the
/// leading term is the last map entry.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<PMonomial, Q>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Q) -> Self {
        let mut p = MPoly::zero();
        p.add_term(PMonomial::one(), c);
        p
    }

    pub fn var(v: u32) -> Self {
        let mut p = MPoly::zero();
        p.add_term(PMonomial::var(v), Q::from_integer(1.into()));
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (PMonomial, Q)>) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: PMonomial, c: Q) {
        if num::Zero::is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if num::Zero::is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&PMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term in grevlex.
    pub fn leading(&self) -> Option<(&PMonomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn as_constant(&self) -> Option<&Q> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c);
            }
        }
        if self.terms.is_empty() {
            // handled by caller via is_empty; zero is a constant too but
            // callers distinguish it.
            return None;
        }
        None
    }

    pub fn variables(&self) -> std::collections::BTreeSet<u32> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_term(&self, m: &PMonomial, c: &Q) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            out.add_term(ma.mul(m), ca * c);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> MPoly {
        if num::Zero::is_zero(c) {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut out = MPoly::constant(Q::from_integer(1.into()));
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Substitute a polynomial for one variable.
    pub fn substitute(&self, v: u32, value: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent_of(v);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
            } else {
                let rest = PMonomial(
                    m.0.iter().cloned().filter(|&(w, _)| w != v).collect::<Vec<_>>(),
                );
                let repl = value.pow(e).mul_term(&rest, c);
                out = out.add(&repl);
            }
        }
        out
    }

    /// Divide by a monomial known to divide every term.
    pub fn div_monomial(&self, m: &PMonomial) -> Option<MPoly> {
        let mut out = MPoly::zero();
        for (t, c) in &self.terms {
            out.add_term(t.div(m)?, c.clone());
        }
        Some(out)
    }

    /// Greatest common monomial factor of all terms.
    pub fn content_monomial(&self) -> PMonomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return PMonomial::one() };
        let mut g = first.clone();
        for m in it {
            g = g.gcd(m);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Make the leading coefficient 1.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => MPoly::zero(),
            Some((_, c)) => {
                let inv = Q::from_integer(1.into()) / c;
                self.scale(&inv)
            }
        }
    }

    pub fn show(&self, names: &dyn Fn(u32) -> String) -> String {
        if self.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mono = if m.is_one() {
                String::new()
            } else {
                m.0.iter()
                    .map(|&(v, e)| {
                        if e == 1 {
                            names(v)
                        } else {
                            format!("{}^{}", names(v), e)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            };
            let cs = crate::ring::show_q(c);
            let body = match (cs.as_str(), mono.is_empty()) {
                (_, true) => cs.clone(),
                ("1", false) => mono.clone(),
                ("-1", false) => format!("-{}", mono),
                (_, false) => format!("{}*{}", cs, mono),
            };
            parts.push(body);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

impl Ring for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::constant(Q::from_integer(1.into()))
    }
    fn is_zero(&self) -> bool {
        self.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn from_q(q: &Q) -> Self {
        MPoly::constant(q.clone())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.show(&|v| format!("u{}", v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::qi;

    #[test]
    fn grevlex_classic_order() {
        // x0^2 > x0*x1 > x1^2 in grevlex.
        let x2 = PMonomial::from_pairs(&[(0, 2)]);
        let xy = PMonomial::from_pairs(&[(0, 1), (1, 1)]);
        let y2 = PMonomial::from_pairs(&[(1, 2)]);
        assert!(x2 > xy);
        assert!(xy > y2);
        // Degree dominates.
        let x3 = PMonomial::from_pairs(&[(0, 3)]);
        assert!(x3 > x2);
        // Tie-break against a third variable: x0*x2 vs x1^2.
        let xz = PMonomial::from_pairs(&[(0, 1), (2, 1)]);
        let y2b = PMonomial::from_pairs(&[(1, 2)]);
        assert!(y2b > xz);
    }

    #[test]
    fn arithmetic_and_substitution() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let p = x.mul(&x).sub(&y.scale(&qi(2))); // x^2 - 2y
        let q = p.substitute(1, &x.mul(&x)); // x^2 - 2x^2 = -x^2
        assert_eq!(q, x.mul(&x).scale(&qi(-1)));
        assert!(p.substitute(0, &MPoly::zero()).eq(&y.scale(&qi(-2))));
    }

    #[test]
    fn content_and_division() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        // x^2 y + x y^2 has content xy
        let p = x.pow(2).mul(&y).add(&x.mul(&y.pow(2)));
        let g = p.content_monomial();
        assert_eq!(g, PMonomial::from_pairs(&[(0, 1), (1, 1)]));
        let q = p.div_monomial(&g).unwrap();
        assert_eq!(q, x.add(&y));
    }
}
