//! Exact linear algebra over the rationals.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_rational_rows(rows: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&x| rational(x)).collect()).collect()
}

pub fn int_to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// columns. Zero rows are removed.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in col..ncols {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : A x = 0}` where `A` has the given rows and `ncols`
/// columns.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut is_pivot = alloc::vec![None; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = alloc::vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Scales a rational vector to a primitive integer vector (gcd 1) whose
/// first nonzero entry is positive. The zero vector maps to zeros.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let ints = integer_direction(v);
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        ints.into_iter().map(|x| -x).collect()
    } else {
        ints
    }
}

/// Positive rescaling of a rational vector to a primitive integer vector.
/// Unlike [`primitive_integer`] the direction (sign) is preserved.
pub fn integer_direction(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Linear combination `sum_k coeffs[k] * rows[k]`.
pub fn combine(coeffs: &[Rational], rows: &[Vec<Rational>], ncols: usize) -> Vec<Rational> {
    let mut out = alloc::vec![Rational::zero(); ncols];
    for (c, row) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += c * x;
        }
    }
    out
}

/// Transpose of a dense matrix given by rows.
pub fn transpose(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    (0..ncols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

/// An exact basis of a subspace of `Q^dimension`, stored as primitive
/// integer vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalBasis {
    pub dimension: usize,
    pub vectors: Vec<Vec<BigInt>>,
}

impl RationalBasis {
    /// Canonical basis of the span of `generators`: the nonzero rows of the
    /// reduced row echelon form, each scaled to a primitive integer vector.
    pub fn span_of(generators: Vec<Vec<Rational>>, dimension: usize) -> Self {
        let mut rows = generators;
        rref(&mut rows);
        RationalBasis {
            dimension,
            vectors: rows.iter().map(|r| primitive_integer(r)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn rational_vectors(&self) -> Vec<Vec<Rational>> {
        self.vectors.iter().map(|v| int_to_rational(v)).collect()
    }

    /// Basis of the orthogonal complement.
    pub fn orthogonal_complement(&self) -> Self {
        let rows = self.rational_vectors();
        let null = nullspace(&rows, self.dimension);
        RationalBasis::span_of(null, self.dimension)
    }

    /// True if `v` lies in the span.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut rows = self.rational_vectors();
        let r = self.rank();
        rows.push(v.to_vec());
        rank(&rows) == r
    }

    /// True if both bases span the same subspace.
    pub fn same_span(&self, other: &RationalBasis) -> bool {
        if self.dimension != other.dimension || self.rank() != other.rank() {
            return false;
        }
        other.rational_vectors().iter().all(|v| self.contains(v))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        self.vectors
            .iter()
            .map(|v| v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }
}
