//! Subresultant PRS over an exact integral domain.
//!
//! The same routine computes integer resultants and resultants with
//! coefficients in `Z[x]` (used for the eigenvalue-ratio polynomial).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPoly;

/// Integral domain with exact division.
pub trait ExactRing: Clone + PartialEq {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn ring_is_zero(&self) -> bool;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    /// Exact quotient. Panics if the division is not exact: callers only use
    /// it where exactness is a theorem (subresultant divisions).
    fn ring_div_exact(&self, other: &Self) -> Self;

    fn ring_pow(&self, e: usize) -> Self {
        (0..e).fold(Self::ring_one(), |acc, _| acc.ring_mul(self))
    }
}

impl ExactRing for BigInt {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn ring_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn ring_add(&self, o: &Self) -> Self {
        self + o
    }
    fn ring_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_div_exact(&self, o: &Self) -> Self {
        let (q, r) = num_integer::Integer::div_rem(self, o);
        assert!(Zero::is_zero(&r), "inexact integer division in subresultant PRS");
        q
    }
}

impl ExactRing for IntPoly {
    fn ring_zero() -> Self {
        IntPoly::zero()
    }
    fn ring_one() -> Self {
        IntPoly::one()
    }
    fn ring_is_zero(&self) -> bool {
        IntPoly::is_zero(self)
    }
    fn ring_add(&self, o: &Self) -> Self {
        IntPoly::add(self, o)
    }
    fn ring_sub(&self, o: &Self) -> Self {
        IntPoly::sub(self, o)
    }
    fn ring_mul(&self, o: &Self) -> Self {
        IntPoly::mul(self, o)
    }
    fn ring_neg(&self) -> Self {
        IntPoly::neg(self)
    }
    fn ring_div_exact(&self, o: &Self) -> Self {
        IntPoly::div_exact(self, o).expect("inexact polynomial division in subresultant PRS")
    }
}

fn trim<R: ExactRing>(v: &mut Vec<R>) {
    while v.last().map_or(false, ExactRing::ring_is_zero) {
        v.pop();
    }
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
pub(crate) fn pseudo_rem<R: ExactRing>(a: &[R], b: &[R]) -> Vec<R> {
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "pseudo-remainder by zero");
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return r;
    }
    let lcb = b[db].clone();
    let mut e = r.len() - 1 - db + 1;
    while !r.is_empty() && r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for x in r.iter_mut() {
            *x = x.ring_mul(&lcb);
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = r[shift + j].ring_sub(&lr.ring_mul(bj));
        }
        trim(&mut r);
        e -= 1;
    }
    let f = lcb.ring_pow(e);
    r.iter().map(|x| x.ring_mul(&f)).collect()
}

/// Resultant of two univariate polynomials (coefficients constant term first).
pub fn resultant<R: ExactRing>(a: &[R], b: &[R]) -> R {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return R::ring_zero();
    }
    let mut negate = false;
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            negate = true;
        }
    }
    if b.len() == 1 {
        let r = b[0].ring_pow(a.len() - 1);
        return if negate { r.ring_neg() } else { r };
    }
    let mut g = R::ring_one();
    let mut h = R::ring_one();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        if r.is_empty() {
            return R::ring_zero();
        }
        let divisor = g.ring_mul(&h.ring_pow(delta));
        b = r.iter().map(|x| x.ring_div_exact(&divisor)).collect();
        g = a.last().unwrap().clone();
        if delta > 0 {
            h = g.ring_pow(delta).ring_div_exact(&h.ring_pow(delta - 1));
        }
        if b.len() == 1 {
            let da = a.len() - 1;
            let res = b[0].ring_pow(da).ring_div_exact(&h.ring_pow(da - 1));
            return if negate { res.ring_neg() } else { res };
        }
    }
}
