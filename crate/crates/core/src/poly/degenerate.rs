use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

use super::cyclotomic::unit_root_orders;
use super::resultant::resultant;
use super::IntPoly;

/// Polynomial whose roots are the ratios `b/a` of distinct nonzero roots of `p`.
///
/// Computes `Res_y(q(y), q(x y))` for the squarefree part `q` of `p` with
/// factors of `x` removed, then divides out `(x - 1)^deg q`, which accounts
/// for the pairs `a = b`.
pub fn ratio_polynomial(p: &IntPoly) -> Result<IntPoly> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    let sq = p.squarefree_part();
    let q = sq.shift_down(sq.trailing_zeros());
    if q.deg() <= 1 {
        return Ok(IntPoly::one());
    }
    let fy: Vec<IntPoly> = q.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect();
    let gy: Vec<IntPoly> = q
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| IntPoly::monomial(i).scale(c))
        .collect();
    let mut r = resultant(&fy, &gy);
    let x_minus_one = IntPoly::from_i64(&[-1, 1]);
    for _ in 0..q.deg() {
        r = r
            .div_exact(&x_minus_one)
            .ok_or_else(|| Error::Internal("ratio resultant not divisible by (x-1)^deg".into()))?;
    }
    Ok(r)
}

fn check_nonzero(a: &IntMatrix) -> Result<()> {
    if a.dim() == 0 || a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    Ok(())
}

/// Orders of all roots of unity occurring as ratios of distinct eigenvalues.
pub fn unit_ratio_orders(a: &IntMatrix) -> Result<Vec<u64>> {
    check_nonzero(a)?;
    let r = ratio_polynomial(&a.char_poly())?;
    if r.is_constant() {
        return Ok(Vec::new());
    }
    unit_root_orders(&r)
}

/// Smallest `k` such that two distinct eigenvalues of `a` have a ratio that is
/// a primitive `k`-th root of unity, or `None` if `a` is non-degenerate.
pub fn is_degenerate(a: &IntMatrix) -> Result<Option<u64>> {
    Ok(unit_ratio_orders(a)?.first().copied())
}

/// Smallest `k` with `a^k` non-degenerate: the lcm of all unit-ratio orders.
pub fn nondegenerate_power(a: &IntMatrix) -> u64 {
    if a.dim() == 0 || a.is_zero() {
        return 1;
    }
    unit_ratio_orders(a)
        .unwrap_or_default()
        .into_iter()
        .fold(1, |acc, k| acc.lcm(&k))
}
