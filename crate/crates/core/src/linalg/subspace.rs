//! Minimal (cyclic) subspaces, restrictions to saturated lattice bases, and
//! the nilpotent-part projection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
#[cfg(test)]
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{column_hnf, rat, rref, saturate_lattice, solve_in_span, IntMatrix, IntVector, RatVector};
use crate::error::{Error, Result};
use crate::poly::RatPoly;

/// Rational invariant subspace with a lattice basis of `V ∩ Z^d` and the
/// integer matrix of the restricted map in that basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalSubspace {
    pub ambient_dim: usize,
    pub rank: usize,
    #[serde(with = "crate::report::bigint_columns")]
    pub lattice_basis: Vec<IntVector>,
    pub restriction: IntMatrix,
}

impl MinimalSubspace {
    /// Builds the subspace from (any) rational generators of an `a`-invariant
    /// subspace: saturates, then restricts.
    pub fn from_generators(a: &IntMatrix, generators: &[RatVector]) -> Result<Self> {
        let basis = saturate_lattice(generators)?;
        let restriction = restrict(a, &basis)?;
        Ok(MinimalSubspace { ambient_dim: a.dim(), rank: basis.len(), lattice_basis: basis, restriction })
    }

    /// The whole space `Q^d` with the standard basis.
    pub fn full(a: &IntMatrix) -> Self {
        let d = a.dim();
        let basis = (0..d).map(|j| (0..d).map(|i| BigInt::from((i == j) as i64)).collect()).collect();
        MinimalSubspace { ambient_dim: d, rank: d, lattice_basis: basis, restriction: a.clone() }
    }

    pub fn is_full(&self) -> bool {
        self.rank == self.ambient_dim
    }

    /// Coordinates of `v` with respect to the lattice basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &RatVector) -> Option<Vec<BigRational>> {
        let cols: Vec<Vec<BigRational>> = self.lattice_basis.iter().map(|c| c.iter().map(rat).collect()).collect();
        solve_in_span(&cols, &v.0)
    }

    pub fn contains(&self, v: &RatVector) -> bool {
        self.coordinates(v).is_some()
    }

    /// Maps lattice coordinates back to the ambient space.
    pub fn embed(&self, coords: &[BigInt]) -> IntVector {
        let mut out = vec![BigInt::zero(); self.ambient_dim];
        for (c, col) in coords.iter().zip(&self.lattice_basis) {
            for (o, x) in out.iter_mut().zip(col) {
                *o += c * x;
            }
        }
        out
    }

    pub fn hnf(&self) -> Vec<IntVector> {
        column_hnf(&self.lattice_basis)
    }
}

/// `Span{v, Av, ..., A^{d-1}v}` with its saturated lattice basis and the
/// restriction of `A`.
pub fn cyclic_subspace(a: &IntMatrix, v: &RatVector) -> Result<MinimalSubspace> {
    if v.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: v.dim() });
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let iterates = krylov_basis(a, v);
    MinimalSubspace::from_generators(a, &iterates)
}

/// The independent prefix `v, Av, ..., A^{r-1}v` of the Krylov sequence.
pub(crate) fn krylov_basis(a: &IntMatrix, v: &RatVector) -> Vec<RatVector> {
    let mut out = vec![v.clone()];
    let mut rows = vec![v.0.clone()];
    let mut current = v.clone();
    for _ in 1..a.dim() {
        current = a.mul_rat_vec(&current);
        let mut trial = rows.clone();
        trial.push(current.0.clone());
        if rref(&mut trial).len() < trial.len() {
            break;
        }
        rows.push(current.0.clone());
        out.push(current.clone());
    }
    out
}

/// Integer matrix `B` with `A * basis = basis * B`.
pub fn restrict(a: &IntMatrix, basis: &[IntVector]) -> Result<IntMatrix> {
    let r = basis.len();
    if r == 0 {
        return Err(Error::Degenerate("empty basis".into()));
    }
    let cols: Vec<Vec<BigRational>> = basis.iter().map(|c| c.iter().map(rat).collect()).collect();
    let mut b = IntMatrix::zeros(r);
    for (j, g) in basis.iter().enumerate() {
        if g.len() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: g.len() });
        }
        let image: Vec<BigRational> = a.mul_vec(g).iter().map(rat).collect();
        let x = solve_in_span(&cols, &image).ok_or(Error::NotInvariant { column: j })?;
        for (i, xi) in x.into_iter().enumerate() {
            if !xi.is_integer() {
                return Err(Error::NotSaturated { column: j });
            }
            b.set(i, j, xi.to_integer());
        }
    }
    Ok(b)
}

/// Splits off the nilpotent part of `A` on the cyclic subspace of `v`.
///
/// With `charpoly(A|_V) = x^m q(x)`, `q(0) != 0`, returns `(v1, m)` where
/// `v1 = a(A) A^m v` for the Bézout identity `a x^m + b q = 1`. Then
/// `A^n v = A^n v1` for every `n >= m`, and the cyclic subspace of `v1`
/// carries a nonsingular restriction.
pub fn project_remark_b(a: &IntMatrix, v: &RatVector) -> Result<(RatVector, usize)> {
    let space = cyclic_subspace(a, v)?;
    let cp = space.restriction.char_poly();
    let m = cp.trailing_zeros();
    if m == 0 {
        return Ok((v.clone(), 0));
    }
    let q = cp.shift_down(m);
    let xm = RatPoly::monomial(m);
    let (g, s, _) = xm.ext_gcd(&RatPoly::from_int(&q));
    if !g.is_one() {
        return Err(Error::Internal("x^m and the cofactor are not coprime".into()));
    }
    let mut w = v.clone();
    for _ in 0..m {
        w = a.mul_rat_vec(&w);
    }
    // v1 = s(A) w by Horner.
    let mut acc = RatVector(vec![BigRational::zero(); a.dim()]);
    for c in s.coeffs().iter().rev() {
        acc = a.mul_rat_vec(&acc).add(&w.scale(c));
    }
    Ok((acc, m))
}

#[cfg(test)]
pub(crate) fn one_vector(d: usize) -> RatVector {
    RatVector(vec![BigRational::one(); d])
}
