//! Exact integer and rational linear algebra.
//!
//! Everything here works over unbounded integers or exact rationals; rank
//! decisions never touch floating point. Sizes are expected to stay small
//! (alphabets up to about a dozen letters).

mod lattice;
mod perron;
mod subspace;

pub use lattice::{column_hnf, integer_kernel, saturate_lattice};
pub use perron::{collatz_wielandt_lower, is_primitive, perron_lower_bound};
pub use subspace::{cyclic_subspace, project_remark_b, restrict, MinimalSubspace};

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

pub type IntVector = Vec<BigInt>;

/// Square matrix with unbounded integer entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        IntMatrix { dim, data: vec![BigInt::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix must have at least one row".into()));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend(row);
        }
        Ok(IntMatrix { dim, data })
    }

    /// Convenience constructor for small literal matrices.
    ///
    /// Panics if the rows are not square; use [`IntMatrix::from_rows`] for
    /// untrusted input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(rows).expect("square literal matrix")
    }

    /// Builds the matrix whose columns are `cols` (must be square).
    pub fn from_columns(cols: &[IntVector]) -> Result<Self> {
        let dim = cols.len();
        let mut m = Self::zeros(dim);
        for (j, c) in cols.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
            }
            for (i, x) in c.iter().enumerate() {
                m.data[i * dim + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> IntVector {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub(crate) fn check_nonnegative(&self) -> Result<()> {
        match self.data.iter().position(|x| x.is_negative()) {
            Some(p) => Err(Error::NegativeEntry { row: p / self.dim, col: p % self.dim }),
            None => Ok(()),
        }
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(v.len(), self.dim, "dimension mismatch in mul_vec");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_rat_vec(&self, v: &RatVector) -> RatVector {
        assert_eq!(v.dim(), self.dim, "dimension mismatch in mul_rat_vec");
        RatVector(
            (0..self.dim)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(&v.0)
                        .filter(|(a, _)| !a.is_zero())
                        .map(|(a, b)| b * BigRational::from_integer(a.clone()))
                        .fold(BigRational::zero(), |acc, x| acc + x)
                })
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntMatrix { dim: self.dim, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        IntMatrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.dim;
        let mut m = self.rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    /// Characteristic polynomial `det(xI - A)` by Faddeev–LeVerrier.
    ///
    /// Every division in the recurrence is exact over the integers.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.dim;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = Self::zeros(n);
        for k in 1..=n {
            m = self * &m;
            for i in 0..n {
                let idx = i * n + i;
                m.data[idx] += &coeffs[n - k + 1];
            }
            let am = self * &m;
            let (q, r) = (-am.trace()).div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero(), "Faddeev–LeVerrier division must be exact");
            coeffs[n - k] = q;
        }
        IntPoly::new(coeffs)
    }

    /// Evaluates a polynomial at this matrix (Horner).
    pub fn eval_poly(&self, p: &IntPoly) -> Self {
        let n = self.dim;
        let mut acc = Self::zeros(n);
        for c in p.coeffs().iter().rev() {
            acc = &acc * self;
            for i in 0..n {
                acc.data[i * n + i] += c;
            }
        }
        acc
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
            .collect()
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.dim).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        write!(f, "IntMatrix{rows:?}")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.dim).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<crate::report::BigIntRepr>> = Vec::deserialize(d)?;
        let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
        IntMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Vector of exact rationals (always kept in lowest terms by `BigRational`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatVector(pub Vec<BigRational>);

impl RatVector {
    pub fn from_ints(v: &[i64]) -> Self {
        RatVector(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn from_bigints(v: &[BigInt]) -> Self {
        RatVector(v.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    pub fn ones(d: usize) -> Self {
        RatVector(vec![BigRational::one(); d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|x| x.is_positive())
    }

    /// Smallest positive integer multiple of the vector with coprime entries.
    pub fn primitive_integer(&self) -> IntVector {
        let l = self.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
        primitive_part(&ints)
    }

    pub fn sub(&self, other: &Self) -> Self {
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RatVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn dot_int(&self, h: &[BigInt]) -> BigRational {
        self.0
            .iter()
            .zip(h)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * BigRational::from_integer(b.clone()))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl Serialize for RatVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<crate::report::RationalRepr> = Vec::deserialize(d)?;
        Ok(RatVector(v.into_iter().map(|x| x.0).collect()))
    }
}

/// Divides an integer vector by the gcd of its entries; the first nonzero
/// entry of the result is positive.
pub fn primitive_part(v: &[BigInt]) -> IntVector {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    v.iter().map(|x| x / &g * &sign).collect()
}

pub(crate) fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(rows: &mut [Vec<BigRational>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vectors: &[RatVector]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = vectors.iter().map(|v| v.0.clone()).collect();
    rref(&mut rows).len()
}

/// Basis of the right kernel `{x : M x = 0}` of the matrix with the given rows.
pub(crate) fn nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); ncols];
            x[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Solves `sum_j x_j * columns[j] = target` exactly; `None` if inconsistent.
/// The solution is unique when the columns are independent.
pub(crate) fn solve_in_span(columns: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let d = target.len();
    let k = columns.len();
    let mut rows: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = rows[r][k].clone();
    }
    Some(x)
}
