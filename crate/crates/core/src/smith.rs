//! Smith normal form of integer matrices, with the two transformation
//! matrices. Used by the constraint solver to decide multiplicative
//! exponent-lattice systems exactly.

use num::{Integer, One, Signed, Zero};

use crate::ring::Z;

#[derive(Debug, Clone)]
pub struct Smith {
    /// Diagonal entries d_1 | d_2 | ... (trailing zeros trimmed).
    pub diag: Vec<Z>,
    /// Left transform: `u * a * v = d`.
    pub u: Vec<Vec<Z>>,
    pub v: Vec<Vec<Z>>,
    pub rank: usize,
}

/// Compute the Smith normal form of `a` (rows x cols).
pub fn smith_normal_form(a: &[Vec<Z>]) -> Smith {
    let nrows = a.len();
    let ncols = if nrows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Z>> = a.to_vec();
    let mut u = identity(nrows);
    let mut v = identity(ncols);

    let mut t = 0;
    while t < nrows.min(ncols) {
        // Find a nonzero pivot in the lower-right block.
        let Some((pi, pj)) = pivot_min_abs(&m, t) else { break };
        swap_rows(&mut m, &mut u, t, pi);
        swap_cols(&mut m, &mut v, t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..nrows {
                if !m[i][t].is_zero() {
                    let q = div_round(&m[i][t], &m[t][t]);
                    row_sub(&mut m, &mut u, i, t, &q);
                    if !m[i][t].is_zero() {
                        swap_rows(&mut m, &mut u, t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..ncols {
                if !m[t][j].is_zero() {
                    let q = div_round(&m[t][j], &m[t][t]);
                    col_sub(&mut m, &mut v, j, t, &q);
                    if !m[t][j].is_zero() {
                        swap_cols(&mut m, &mut v, t, j);
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }

        // Enforce divisibility d_t | m[i][j] for the rest of the block.
        let mut redo = false;
        'outer: for i in t + 1..nrows {
            for j in t + 1..ncols {
                if !(&m[i][j] % &m[t][t]).is_zero() {
                    // Add row i to row t and restart the elimination.
                    for k in 0..ncols {
                        let add = m[i][k].clone();
                        m[t][k] += add;
                    }
                    for k in 0..nrows {
                        let add = u[i][k].clone();
                        u[t][k] += add;
                    }
                    redo = true;
                    break 'outer;
                }
            }
        }
        if redo {
            continue;
        }

        if m[t][t].is_negative() {
            for k in 0..ncols {
                m[t][k] = -m[t][k].clone();
            }
            for k in 0..nrows {
                u[t][k] = -u[t][k].clone();
            }
        }
        t += 1;
    }

    let mut diag = Vec::new();
    for i in 0..nrows.min(ncols) {
        if m[i][i].is_zero() {
            break;
        }
        diag.push(m[i][i].clone());
    }
    let rank = diag.len();
    Smith { diag, u, v, rank }
}

fn identity(n: usize) -> Vec<Vec<Z>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Z::one() } else { Z::zero() }).collect())
        .collect()
}

fn pivot_min_abs(m: &[Vec<Z>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.len() {
        for j in t..m[i].len() {
            if !m[i][j].is_zero() {
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if m[i][j].abs() < m[bi][bj].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
    }
    best
}

fn div_round(a: &Z, b: &Z) -> Z {
    // Round-toward-nearest keeps entries small.
    let (q, r) = a.div_rem(b);
    if (&r * 2u8).abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn swap_rows(m: &mut [Vec<Z>], u: &mut [Vec<Z>], a: usize, b: usize) {
    if a != b {
        m.swap(a, b);
        u.swap(a, b);
    }
}

fn swap_cols(m: &mut [Vec<Z>], v: &mut [Vec<Z>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
    for row in v.iter_mut() {
        row.swap(a, b);
    }
}

fn row_sub(m: &mut [Vec<Z>], u: &mut [Vec<Z>], dst: usize, src: usize, q: &Z) {
    if q.is_zero() {
        return;
    }
    for k in 0..m[dst].len() {
        let d = q * &m[src][k];
        m[dst][k] -= d;
    }
    for k in 0..u[dst].len() {
        let d = q * &u[src][k];
        u[dst][k] -= d;
    }
}

fn col_sub(m: &mut [Vec<Z>], v: &mut [Vec<Z>], dst: usize, src: usize, q: &Z) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let d = q * &row[src];
        row[dst] -= d;
    }
    for row in v.iter_mut() {
        let d = q * &row[src];
        row[dst] -= d;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> Z {
        Z::from(n)
    }

    fn matmul(a: &[Vec<Z>], b: &[Vec<Z>]) -> Vec<Vec<Z>> {
        let n = a.len();
        let k = if n == 0 { 0 } else { a[0].len() };
        let m = if b.is_empty() { 0 } else { b[0].len() };
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn snf_of_full_rank_matrix() {
        // The exponent matrix [[6,-5],[9,-7]] from the lattice example:
        // determinant -42+45 = 3, so SNF diag is (1, 3).
        let a = vec![vec![z(6), z(-5)], vec![z(9), z(-7)]];
        let s = smith_normal_form(&a);
        assert_eq!(s.rank, 2);
        assert_eq!(s.diag, vec![z(1), z(3)]);
        // u*a*v == diag(d)
        let uav = matmul(&matmul(&s.u, &a), &s.v);
        assert_eq!(uav[0][0], z(1));
        assert_eq!(uav[1][1], z(3));
        assert!(uav[0][1].is_zero() && uav[1][0].is_zero());
    }

    #[test]
    fn snf_rank_deficient() {
        let a = vec![vec![z(2), z(4)], vec![z(1), z(2)]];
        let s = smith_normal_form(&a);
        assert_eq!(s.rank, 1);
        assert_eq!(s.diag, vec![z(1)]);
    }

    #[test]
    fn snf_divisibility_chain() {
        let a = vec![vec![z(2), z(0)], vec![z(0), z(3)]];
        let s = smith_normal_form(&a);
        assert_eq!(s.rank, 2);
        assert_eq!(s.diag, vec![z(1), z(6)]);
    }
}
