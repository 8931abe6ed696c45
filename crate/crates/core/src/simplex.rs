//! Exact feasibility of `{x >= 0 : A x = b}` by Phase-I simplex over the
//! rationals with Bland's anti-cycling rule.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::linalg::Rational;

/// Returns a feasible point of `{x >= 0 : A x = b}` or `None` if the set is
/// empty. `a` is given by rows; every `b[i]` must be nonnegative.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational], nvars: usize) -> Option<Vec<Rational>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    assert!(b.iter().all(|x| !x.is_negative()), "right-hand side must be nonnegative");
    let width = nvars + rows + 1;
    let rhs = width - 1;

    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), nvars);
        let mut r = Vec::with_capacity(width);
        r.extend(row.iter().cloned());
        for k in 0..rows {
            r.push(if k == i { Rational::from_integer(1.into()) } else { Rational::zero() });
        }
        r.push(b[i].clone());
        t.push(r);
    }
    let mut basis: Vec<usize> = (nvars..nvars + rows).collect();

    // Reduced costs of the auxiliary objective (sum of artificials).
    let mut obj = alloc::vec![Rational::zero(); width];
    for r in &t {
        for j in 0..nvars {
            obj[j] -= &r[j];
        }
        obj[rhs] -= &r[rhs];
    }

    // Bland's rule: lowest-index entering column.
    while let Some(enter) = (0..nvars + rows).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<usize> = None;
        for i in 0..rows {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][rhs] / &t[i][enter];
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let best = &t[l][rhs] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        // The auxiliary problem is bounded below by zero.
        let l = leave.expect("phase I objective is bounded");
        pivot(&mut t, &mut obj, l, enter);
        basis[l] = enter;
    }

    if !obj[rhs].is_zero() {
        return None;
    }
    let mut x = alloc::vec![Rational::zero(); nvars];
    for (i, &v) in basis.iter().enumerate() {
        if v < nvars {
            x[v] = t[i][rhs].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rational>], obj: &mut [Rational], row: usize, col: usize) {
    let inv = t[row][col].recip();
    for x in t[row].iter_mut() {
        *x *= &inv;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (x, p) in r.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
    let f = obj[col].clone();
    if !f.is_zero() {
        for (x, p) in obj.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
}
