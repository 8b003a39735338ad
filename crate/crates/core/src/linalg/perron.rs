//! Perron–Frobenius helpers for nonnegative integer matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{IntMatrix, RatVector};
use crate::error::{Error, Result};

/// `min_i (A u)_i / u_i`, a lower bound for the Perron eigenvalue of a
/// nonnegative `A` and any positive `u`.
pub fn collatz_wielandt_lower(a: &IntMatrix, u: &RatVector) -> Result<BigRational> {
    a.check_nonnegative()?;
    if u.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: u.dim() });
    }
    if !u.is_positive() {
        return Err(Error::NotPositive);
    }
    let au = a.mul_rat_vec(u);
    au.0.iter()
        .zip(&u.0)
        .map(|(x, y)| x / y)
        .min()
        .ok_or_else(|| Error::InvalidArgument("empty matrix".into()))
}

/// Iterates `u <- A u` from `u = 1` and returns the best Collatz–Wielandt
/// lower bound seen after at most `rounds` refinements, stopping early once
/// `stop(bound)` holds. Returns the bound and the number of rounds used.
pub fn perron_lower_bound(
    a: &IntMatrix,
    rounds: usize,
    mut stop: impl FnMut(&BigRational) -> bool,
) -> Result<(BigRational, usize)> {
    a.check_nonnegative()?;
    let mut u: Vec<BigInt> = vec![BigInt::from(1); a.dim()];
    let mut best: Option<BigRational> = None;
    for round in 0..=rounds {
        let au = a.mul_vec(&u);
        if u.iter().any(|x| !x.is_positive()) {
            break;
        }
        let cw = au
            .iter()
            .zip(&u)
            .map(|(x, y)| BigRational::new(x.clone(), y.clone()))
            .min()
            .unwrap_or_else(BigRational::zero);
        if best.as_ref().map_or(true, |b| &cw > b) {
            best = Some(cw);
        }
        if stop(best.as_ref().unwrap()) {
            return Ok((best.unwrap(), round));
        }
        // Keep the iterate primitive so the integers stay small.
        u = crate::linalg::primitive_part(&au);
    }
    best.map(|b| (b, rounds)).ok_or(Error::NotPositive)
}

/// Primitivity by Wielandt's bound: `A^{(d-1)^2+1} > 0` over the boolean semiring.
pub fn is_primitive(a: &IntMatrix) -> Result<bool> {
    a.check_nonnegative()?;
    let d = a.dim();
    let base: Vec<Vec<bool>> = (0..d).map(|i| (0..d).map(|j| !a.get(i, j).is_zero()).collect()).collect();
    let mul = |x: &Vec<Vec<bool>>, y: &Vec<Vec<bool>>| -> Vec<Vec<bool>> {
        (0..d).map(|i| (0..d).map(|j| (0..d).any(|k| x[i][k] && y[k][j])).collect()).collect()
    };
    let mut e = (d - 1) * (d - 1) + 1;
    let mut acc: Option<Vec<Vec<bool>>> = None;
    let mut p = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => p.clone(),
                Some(a) => mul(&a, &p),
            });
        }
        e >>= 1;
        if e > 0 {
            p = mul(&p, &p);
        }
    }
    Ok(acc.map_or(false, |m| m.iter().all(|r| r.iter().all(|&b| b))))
}
