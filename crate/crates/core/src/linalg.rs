use num::{BigInt, One, Signed, Zero};

use crate::ring::{Q, Z};

/// Sparse matrix over the rationals, stored by rows. Row entries are kept
/// sorted by column with no explicit zeros.
#[derive(Debug, Clone)]
pub struct SparseMat {
    ncols: usize,
    rows: Vec<Vec<(usize, Q)>>,
}

impl SparseMat {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMat { ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        assert!(j < self.ncols);
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |&(c, _)| c) {
            Ok(pos) => {
                if v.is_zero() {
                    row.remove(pos);
                } else {
                    row[pos].1 = v;
                }
            }
            Err(pos) => {
                if !v.is_zero() {
                    row.insert(pos, (j, v));
                }
            }
        }
    }

    pub fn rows(&self) -> &[Vec<(usize, Q)>] {
        &self.rows
    }

    /// Exact rank by fraction-free (Bareiss) elimination over the
    /// integers after clearing row denominators.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Z>> = self
            .rows
            .iter()
            .map(|row| {
                let mut lcm: Z = Z::one();
                for (_, v) in row {
                    lcm = num::integer::lcm(lcm, v.denom().clone());
                }
                let mut dense = vec![Z::zero(); self.ncols];
                for (j, v) in row {
                    dense[*j] = v.numer() * (&lcm / v.denom());
                }
                dense
            })
            .collect();
        bareiss_rank(&mut m)
    }

    /// Rank over the prime field F_p; a fast path that must agree with the
    /// exact rank on every test matrix. Rows whose denominators vanish
    /// mod p make the answer `None`.
    pub fn rank_mod_p(&self, p: u64) -> Option<usize> {
        let mut m: Vec<Vec<u64>> = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut dense = vec![0u64; self.ncols];
            for (j, v) in row {
                let num = mod_reduce(v.numer(), p);
                let den = mod_reduce(v.denom(), p);
                if den == 0 {
                    return None;
                }
                dense[*j] = mul_mod(num, inv_mod(den, p)?, p);
            }
            m.push(dense);
        }
        Some(rank_mod(&mut m, p))
    }
}

fn bareiss_rank(m: &mut [Vec<Z>]) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut prev = Z::one();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for r in row + 1..nrows {
            for c in col + 1..ncols {
                let t = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                // Bareiss two-step division is exact.
                m[r][c] = t / &prev;
            }
            m[r][col] = Z::zero();
        }
        prev = m[row][col].clone();
        row += 1;
        rank += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

fn rank_mod(m: &mut [Vec<u64>], p: u64) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, piv);
        let inv = inv_mod(m[row][col], p).expect("pivot nonzero mod prime");
        for r in row + 1..nrows {
            if m[r][col] != 0 {
                let f = mul_mod(m[r][col], inv, p);
                for c in col..ncols {
                    let sub = mul_mod(f, m[row][c], p);
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        row += 1;
        rank += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

fn mod_reduce(x: &BigInt, p: u64) -> u64 {
    let m = x % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    let (_, digits) = m.to_u64_digits();
    *digits.first().unwrap_or(&0)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    // Fermat: p is prime.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    Some(result)
}

/// Row-echelon factorization of a sparse rational matrix, retained so many
/// right-hand sides can be solved against the same matrix. Elimination is
/// plain rational Gauss with sparsity-aware pivoting; the operation log is
/// replayed on each right-hand side.
#[derive(Debug, Clone)]
pub struct Echelon {
    ncols: usize,
    /// Echelonized rows (sorted by leading column).
    rows: Vec<Vec<(usize, Q)>>,
    /// Leading column of each echelon row.
    leads: Vec<usize>,
    /// Log of (target_original_row, source_echelon_index, factor) plus row
    /// order, replayed on right-hand sides.
    ops: Vec<RowOp>,
    nrows: usize,
}

#[derive(Debug, Clone)]
enum RowOp {
    /// rhs[dst] -= factor * rhs_of_echelon_row[src_idx]
    Eliminate { dst: usize, src: usize, factor: Q },
    /// Original row `orig` became echelon row `idx`.
    Freeze { orig: usize, idx: usize },
}

impl Echelon {
    pub fn new(mat: &SparseMat) -> Self {
        let ncols = mat.ncols;
        let mut work: Vec<(usize, Vec<(usize, Q)>)> =
            mat.rows.iter().cloned().enumerate().collect();
        let mut rows: Vec<Vec<(usize, Q)>> = Vec::new();
        let mut leads: Vec<usize> = Vec::new();
        let mut ops: Vec<RowOp> = Vec::new();

        for col in 0..ncols {
            // Shortest eligible row keeps fill-in down.
            let pick = work
                .iter()
                .enumerate()
                .filter(|(_, (_, r))| r.first().map(|&(c, _)| c) == Some(col))
                .min_by_key(|(_, (_, r))| r.len())
                .map(|(i, _)| i);
            let Some(pick) = pick else { continue };
            let (orig, pivot_row) = work.remove(pick);
            let idx = rows.len();
            ops.push(RowOp::Freeze { orig, idx });
            let pivot_val = pivot_row[0].1.clone();

            for (worig, wrow) in work.iter_mut() {
                if wrow.first().map(|&(c, _)| c) == Some(col) {
                    let factor = &wrow[0].1 / &pivot_val;
                    *wrow = sub_scaled(wrow, &pivot_row, &factor);
                    ops.push(RowOp::Eliminate { dst: *worig, src: idx, factor });
                }
            }
            rows.push(pivot_row);
            leads.push(col);
        }
        Echelon { ncols, rows, leads, ops, nrows: mat.nrows() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Solve `M x = rhs` if consistent, returning one solution (free
    /// variables set to zero).
    pub fn solve(&self, rhs: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(rhs.len(), self.nrows);
        let mut b: Vec<Q> = rhs.to_vec();
        let mut frozen: Vec<Q> = vec![Q::zero(); self.rows.len()];
        for op in &self.ops {
            match op {
                RowOp::Freeze { orig, idx } => frozen[*idx] = b[*orig].clone(),
                RowOp::Eliminate { dst, src, factor } => {
                    let delta = factor * &frozen[*src];
                    b[*dst] = &b[*dst] - &delta;
                }
            }
        }
        // Any residual right-hand side on fully eliminated rows means the
        // system is inconsistent.
        let mut consumed = vec![false; self.nrows];
        for op in &self.ops {
            if let RowOp::Freeze { orig, .. } = op {
                consumed[*orig] = true;
            }
        }
        for (i, used) in consumed.iter().enumerate() {
            if !used && !b[i].is_zero() {
                return None;
            }
        }
        // Back substitution on the echelon rows.
        let mut x = vec![Q::zero(); self.ncols];
        for i in (0..self.rows.len()).rev() {
            let mut acc = frozen[i].clone();
            let mut pivot = Q::zero();
            for (c, v) in &self.rows[i] {
                if *c == self.leads[i] {
                    pivot = v.clone();
                } else {
                    acc = &acc - &(v * &x[*c]);
                }
            }
            x[self.leads[i]] = &acc / &pivot;
        }
        Some(x)
    }
}

fn sub_scaled(a: &[(usize, Q)], b: &[(usize, Q)], factor: &Q) -> Vec<(usize, Q)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, -(factor * &b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = &a[i].1 - &(factor * &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (c, v) in &b[j..] {
        out.push((*c, -(factor * v)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q, qi};

    const P: u64 = (1 << 61) - 1;

    fn mat(rows: &[&[i64]]) -> SparseMat {
        let ncols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut m = SparseMat::new(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if v != 0 {
                    m.set(i, j, qi(v));
                }
            }
        }
        m
    }

    #[test]
    fn rank_simple() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_mod_p(P), Some(2));
    }

    #[test]
    fn rank_with_fractions() {
        let mut m = SparseMat::new(2, 2);
        m.set(0, 0, q(1, 2));
        m.set(0, 1, q(1, 3));
        m.set(1, 0, q(3, 2));
        m.set(1, 1, qi(1));
        assert_eq!(m.rank(), 1);
        assert_eq!(m.rank_mod_p(P), Some(1));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = mat(&[&[1, 1], &[1, -1], &[2, 0]]);
        let ech = Echelon::new(&m);
        assert_eq!(ech.rank(), 2);
        let x = ech.solve(&[qi(3), qi(1), qi(4)]).unwrap();
        assert_eq!(x, vec![qi(2), qi(1)]);
        assert!(ech.solve(&[qi(3), qi(1), qi(5)]).is_none());
    }

    #[test]
    fn solve_underdetermined_returns_some_solution() {
        let m = mat(&[&[1, 1, 1]]);
        let ech = Echelon::new(&m);
        let x = ech.solve(&[qi(6)]).unwrap();
        let total: Q = x.iter().sum();
        assert_eq!(total, qi(6));
    }

    #[test]
    fn ranks_agree_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..30 {
            let nr = rng.gen_range(1..8);
            let nc = rng.gen_range(1..8);
            let mut m = SparseMat::new(nr, nc);
            for i in 0..nr {
                for j in 0..nc {
                    if rng.gen_bool(0.5) {
                        m.set(i, j, qi(rng.gen_range(-5..=5)));
                    }
                }
            }
            let exact = m.rank();
            assert_eq!(m.rank_mod_p(P), Some(exact));
            assert_eq!(Echelon::new(&m).rank(), exact);
        }
    }
}
