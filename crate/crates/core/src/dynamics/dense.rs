//! Small dense floating-point solvers.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

/// Solves `A x = b` for symmetric positive definite `A` by Cholesky.
pub fn solve_spd(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = alloc::vec![alloc::vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut y = alloc::vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut x = alloc::vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    Some(x)
}

/// Determinant by LU with partial pivoting.
pub fn determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let p = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[p][col] == 0.0 {
            return 0.0;
        }
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= m[col][col];
        for i in col + 1..n {
            let f = m[i][col] / m[col][col];
            for j in col..n {
                m[i][j] -= f * m[col][j];
            }
        }
    }
    det
}

/// A solution of a consistent system `A x = b` (free variables set to zero)
/// by Gauss-Jordan elimination with complete pivoting. Pivots below
/// `tol * max|A|` are treated as zero. Returns `None` if the system is
/// inconsistent at that tolerance.
pub fn solve_consistent(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row = r.clone();
            row.push(bi);
            row
        })
        .collect();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let mut col_of: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best = (rank, rank, 0.0);
        for i in rank..rows {
            for j in rank..cols {
                let v = m[i][col_of[j]].abs();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= tol * scale {
            break;
        }
        m.swap(rank, best.0);
        col_of.swap(rank, best.1);
        let c = col_of[rank];
        let piv = m[rank][c];
        for v in m[rank].iter_mut() {
            *v /= piv;
        }
        for i in 0..rows {
            if i != rank {
                let f = m[i][c];
                if f != 0.0 {
                    for j in 0..=cols {
                        m[i][j] -= f * m[rank][j];
                    }
                }
            }
        }
        rank += 1;
    }
    let bscale = b.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    if m[rank..].iter().any(|r| r[cols].abs() > tol * bscale * 1e3) {
        return None;
    }
    let mut x = alloc::vec![0.0; cols];
    for i in 0..rank {
        x[col_of[i]] = m[i][cols];
    }
    Some(x)
}
