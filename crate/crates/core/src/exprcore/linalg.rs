//! Exact linear algebra over the rationals and over rational-function fields.

use num_traits::Zero;

use super::chart::Chart;
use super::poly::Poly;
use super::rational::RationalExpr;
use super::Q;
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<RationalExpr>>;

fn pick_pivot(m: &Matrix, col: usize, from: usize) -> Option<usize> {
    (from..m.len()).filter(|&r| !m[r][col].is_zero()).min_by_key(|&r| (m[r][col].complexity(), r))
}

/// Inverse of a square matrix over the function field of `chart`.
///
/// On failure returns [`Error::Singular`] carrying the determinant numerator.
pub fn inverse(chart: &Chart, a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { RationalExpr::one(chart) } else { RationalExpr::zero(chart) }));
            r
        })
        .collect();
    for col in 0..n {
        let p = pick_pivot(&m, col, col).ok_or_else(|| Error::Singular("0".into()))?;
        m.swap(col, p);
        let inv = m[col][col].recip()?;
        let pivot_row: Vec<RationalExpr> = m[col].iter().map(|x| x * &inv).collect();
        m[col] = pivot_row;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..2 * n {
                if !m[col][c].is_zero() {
                    let v = &m[r][c] - &(&f * &m[col][c]);
                    m[r][c] = v;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(chart: &Chart, a: &Matrix) -> RationalExpr {
    let n = a.len();
    let mut m = a.clone();
    let mut det = RationalExpr::one(chart);
    for col in 0..n {
        let Some(p) = pick_pivot(&m, col, col) else {
            return RationalExpr::zero(chart);
        };
        if p != col {
            m.swap(col, p);
            det = -det;
        }
        det = &det * &m[col][col];
        let inv = m[col][col].recip().unwrap();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                if !m[col][c].is_zero() {
                    let v = &m[r][c] - &(&f * &m[col][c]);
                    m[r][c] = v;
                }
            }
        }
    }
    det
}

pub fn mat_vec(m: &Matrix, v: &[RationalExpr]) -> Vec<RationalExpr> {
    m.iter()
        .map(|row| {
            let mut acc = RationalExpr::zero(v[0].chart());
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
        .collect()
}

/// Generic rank over the function field by fraction-free elimination.
///
/// Rows are cleared of denominators first; each elimination step divides by
/// the previous pivot exactly (Bareiss), so entries stay polynomial.
pub fn generic_rank(rows: &Matrix) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Poly>> = rows.iter().map(|r| clear_row(r)).collect();
    let ncols = m[0].len();
    let nrows = m.len();
    let mut rank = 0;
    let mut prev = Poly::one(m[0][0].nvars());
    for col in 0..ncols {
        let Some(p) = (rank..nrows).filter(|&r| !m[r][col].is_zero()).min_by_key(|&r| m[r][col].num_terms()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = &(&m[rank][col] * &m[r][c]) - &(&m[r][col] * &m[rank][c]);
                m[r][c] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[r][col] = Poly::zero(prev.nvars());
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Multiply a row by the lcm of its denominators, returning numerators.
pub fn clear_row(row: &[RationalExpr]) -> Vec<Poly> {
    let n = row[0].chart().ring_size();
    let mut l = Poly::one(n);
    for e in row {
        if !e.denom().is_one() {
            let g = super::gcd::gcd(&l, e.denom());
            l = &l * &e.denom().div_exact(&g).unwrap();
        }
    }
    row.iter().map(|e| &e.numer().clone() * &l.div_exact(e.denom()).unwrap()).collect()
}

/// Solve `A x = b` over the rationals, where A is m x n (any shape).
///
/// Returns `None` when the system is inconsistent; free variables are set to zero.
pub fn solve_rational(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut rows: Vec<Vec<Q>> = a.iter().zip(b).map(|(r, bi)| {
        let mut r = r.clone();
        r.push(bi.clone());
        r
    }).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(row, p);
        let inv = rows[row][col].recip();
        for c in col..=n {
            rows[row][c] = &rows[row][c] * &inv;
        }
        for r in 0..m {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=n {
                    let v = &rows[r][c] - &(&f * &rows[row][c]);
                    rows[r][c] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    if rows[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][n].clone();
    }
    Some(x)
}

/// Rank of a rational matrix.
pub fn rank_rational(a: &[Vec<Q>]) -> usize {
    if a.is_empty() {
        return 0;
    }
    let mut m = a.to_vec();
    let n = m[0].len();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &m[rank][col];
                for c in col..n {
                    let v = &m[r][c] - &(&f * &m[rank][c]);
                    m[r][c] = v;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

pub fn identity(chart: &Chart, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { RationalExpr::one(chart) } else { RationalExpr::zero(chart) }).collect())
        .collect()
}
