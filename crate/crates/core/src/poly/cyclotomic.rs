use crate::error::{Error, Result};

use super::IntPoly;

fn prime_factors(mut k: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            let mut e = 0;
            while k % p == 0 {
                k /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if k > 1 {
        out.push((k, 1));
    }
    out
}

pub fn euler_phi(k: u64) -> u64 {
    prime_factors(k)
        .into_iter()
        .fold(k, |acc, (p, _)| acc / p * (p - 1))
}

/// The `k`-th cyclotomic polynomial.
///
/// Built prime by prime: `Phi_{np}(x) = Phi_n(x^p) / Phi_n(x)` when `p` does
/// not divide `n`, and `Phi_n(x^p)` when it does.
pub fn cyclotomic(k: u64) -> Result<IntPoly> {
    if k == 0 {
        return Err(Error::InvalidArgument("cyclotomic index must be positive".into()));
    }
    let mut phi = IntPoly::from_i64(&[-1, 1]);
    for (p, e) in prime_factors(k) {
        let p = p as usize;
        phi = phi
            .compose_power(p)
            .div_exact(&phi)
            .ok_or_else(|| Error::Internal("cyclotomic division not exact".into()))?;
        for _ in 1..e {
            phi = phi.compose_power(p);
        }
    }
    Ok(phi)
}

/// Largest `k` with `phi(k) <= d` lies below `2 d^2 + 2`.
fn order_bound(d: usize) -> u64 {
    2 * (d as u64) * (d as u64) + 2
}

fn divides(phi: &IntPoly, p: &IntPoly) -> bool {
    phi.deg() <= p.deg() && p.div_rem_monic(phi).1.is_zero()
}

/// All `k` such that `Phi_k` divides `p`, ascending.
pub fn unit_root_orders(p: &IntPoly) -> Result<Vec<u64>> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    let d = p.deg();
    let mut out = Vec::new();
    for k in 1..=order_bound(d) {
        if euler_phi(k) as usize > d {
            continue;
        }
        // Phi_k is irreducible, so a nontrivial gcd means Phi_k divides p.
        if divides(&cyclotomic(k)?, p) {
            out.push(k);
        }
    }
    Ok(out)
}

/// Smallest `k` such that `p` has a primitive `k`-th root of unity as a root.
pub fn has_unit_root(p: &IntPoly) -> Result<Option<u64>> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    let d = p.deg();
    for k in 1..=order_bound(d) {
        if euler_phi(k) as usize <= d && divides(&cyclotomic(k)?, p) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
