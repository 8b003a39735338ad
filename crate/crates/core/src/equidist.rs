//! Equidistribution of `A^n omega v mod 1` for almost every `omega`.
//!
//! The orbit is uniformly distributed for a.e. `omega` exactly when `A` is
//! nonsingular and non-degenerate, has no root-of-unity eigenvalue, and the
//! iterates of `v` span the whole space. Failing cases come with a witness
//! `(h, k)` for which `<A^n v, h>` is badly distributed.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{nullspace, primitive_part, rank, rat, solve_in_span, IntMatrix, IntVector, RatVector};
use crate::poly::{has_unit_root, is_degenerate, unit_ratio_orders};
use crate::torus::{e_phase, required_bits, FixedPointTorusPoint, TorusPoint};

/// Exact check length for emitted witnesses.
pub const WITNESS_CHECK_TERMS: u64 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailedCondition {
    None,
    Singular,
    DependentIterates,
    Degenerate,
    UnitRootEigenvalue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "crate::report::bigint_vec")]
    pub h: IntVector,
    pub k: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UDVerdict {
    pub holds: bool,
    pub failed_condition: FailedCondition,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl UDVerdict {
    fn fail(cond: FailedCondition, witness: Option<Witness>, note: String) -> Self {
        UDVerdict { holds: false, failed_condition: cond, witness, notes: vec![note] }
    }
}

fn iterates(a: &IntMatrix, v: &RatVector, count: usize) -> Vec<RatVector> {
    let mut out = Vec::with_capacity(count);
    let mut x = v.clone();
    for _ in 0..count {
        let next = a.mul_rat_vec(&x);
        out.push(x);
        x = next;
    }
    out
}

/// Decides whether `(A^n omega v)` is u.d. mod 1 for a.e. `omega`.
pub fn ud_conditions(a: &IntMatrix, v: &RatVector) -> Result<UDVerdict> {
    let d = a.dim();
    if v.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: v.dim() });
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if a.det().is_zero() {
        return Ok(UDVerdict::fail(FailedCondition::Singular, None, "det A = 0".into()));
    }
    let r = rank(&iterates(a, v, d));
    if r < d {
        return Ok(UDVerdict::fail(
            FailedCondition::DependentIterates,
            None,
            format!("iterates of v span a subspace of dimension {r} < {d}"),
        ));
    }
    if let Some(k) = is_degenerate(a)? {
        let h = degenerate_witness(a, v, k)?;
        return Ok(UDVerdict::fail(
            FailedCondition::Degenerate,
            Some(Witness { h, k }),
            format!("two eigenvalues have a ratio of order {k}; <A^(kn) v, h> = 0 for all n"),
        ));
    }
    if let Some(k) = has_unit_root(&a.char_poly())? {
        let h = unit_root_witness(a, v, k)?;
        return Ok(UDVerdict::fail(
            FailedCondition::UnitRootEigenvalue,
            Some(Witness { h, k }),
            format!("eigenvalue of order {k}; <A^n v, h> is {k}-periodic"),
        ));
    }
    Ok(UDVerdict { holds: true, failed_condition: FailedCondition::None, witness: None, notes: Vec::new() })
}

/// `[alpha_0, ..., alpha_(d-1)]` with `x_(n+d) = sum alpha_i x_(n+i)` for the
/// characteristic recurrence of `a`.
fn recurrence_coefficients(a: &IntMatrix) -> Vec<BigInt> {
    let p = a.char_poly();
    p.coeffs()[..a.dim()].iter().map(|c| -c).collect()
}

/// Companion matrix shifting `(x_n, ..., x_(n+d-1))` one step forward.
fn companion(alpha: &[BigInt]) -> IntMatrix {
    let d = alpha.len();
    let mut c = IntMatrix::zeros(d);
    for i in 0..d - 1 {
        c.set(i, i + 1, BigInt::one());
    }
    for (j, al) in alpha.iter().enumerate() {
        c.set(d - 1, j, al.clone());
    }
    c
}

/// Integer `h != 0` with `<A^(kn) v, h> = 0` for every `n >= 0`.
///
/// Rows `beta_i` express `x_(ik)` through the initial values `x_0..x_(d-1)`
/// of any sequence with the characteristic recurrence of `a`; a kernel
/// vector `z` of `beta` gives initial values whose `k`-subsequence vanishes,
/// and `h` is the unique vector with `<A^i v, h> = z_i`.
pub fn degenerate_witness(a: &IntMatrix, v: &RatVector, k: u64) -> Result<IntVector> {
    let d = a.dim();
    if v.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: v.dim() });
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if is_degenerate(a)?.is_none() {
        return Err(Error::NotDegenerate { k });
    }
    let ck = companion(&recurrence_coefficients(a)).pow(k as u32);
    let mut row: Vec<BigInt> = (0..d).map(|j| if j == 0 { BigInt::one() } else { BigInt::zero() }).collect();
    let mut beta = Vec::with_capacity(d);
    for _ in 0..d {
        beta.push(row.iter().map(rat).collect::<Vec<BigRational>>());
        // row <- row * C^k
        row = (0..d).map(|j| (0..d).map(|i| &row[i] * ck.get(i, j)).sum()).collect();
    }
    let kernel = nullspace(&beta, d);
    let Some(z) = kernel.first() else {
        let orders = unit_ratio_orders(a)?;
        if orders.iter().any(|o| k % o == 0) {
            return Err(Error::Internal(format!("no vanishing subsequence of step {k} for a degenerate matrix")));
        }
        return Err(Error::InvalidArgument(format!("{k} is not a multiple of a unit-ratio order {orders:?}")));
    };
    let rows = iterates(a, v, d);
    let k_rows: Vec<Vec<BigRational>> = (0..d).map(|j| rows.iter().map(|r| r.0[j].clone()).collect()).collect();
    // K h = z where the rows of K are A^i v; solve over the columns of K
    let h = solve_in_span(&k_rows, z)
        .ok_or_else(|| Error::InvalidArgument("iterates of v are linearly dependent".into()))?;
    let h = RatVector(h).primitive_integer();
    if !verify_vanishing(a, v, &h, k, WITNESS_CHECK_TERMS) {
        return Err(Error::Internal("witness failed exact verification".into()));
    }
    Ok(h)
}

/// Integer `h != 0` with `h^t (A^k - I) = 0`, making `<A^n v, h>` periodic.
pub fn unit_root_witness(a: &IntMatrix, v: &RatVector, k: u64) -> Result<IntVector> {
    let d = a.dim();
    let mut m = a.pow(k as u32).transpose();
    for i in 0..d {
        m.set(i, i, m.get(i, i) - 1);
    }
    let rows: Vec<Vec<BigRational>> = m.rows().iter().map(|r| r.iter().map(rat).collect()).collect();
    let kernel = nullspace(&rows, d);
    let h = kernel
        .first()
        .map(|z| RatVector(z.clone()).primitive_integer())
        .ok_or_else(|| Error::InvalidArgument(format!("A has no eigenvalue of order dividing {k}")))?;
    let x: Vec<BigRational> = iterates(a, v, d + k as usize).iter().map(|u| u.dot_int(&h)).collect();
    if (0..d).all(|i| x[i] == x[i + k as usize]) {
        Ok(h)
    } else {
        Err(Error::Internal("unit-root witness is not periodic".into()))
    }
}

/// Checks `<A^(kn) v, h> = 0` exactly for `n = 0..=terms`.
pub fn verify_vanishing(a: &IntMatrix, v: &RatVector, h: &[BigInt], k: u64, terms: u64) -> bool {
    let ak = a.pow(k as u32);
    let mut x = v.clone();
    for _ in 0..=terms {
        if !x.dot_int(h).is_zero() {
            return false;
        }
        x = ak.mul_rat_vec(&x);
    }
    true
}

/// Integer linear recurrence `u_(n+d) = sum alpha_i u_(n+i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceSeq {
    #[serde(with = "crate::report::bigint_vec")]
    alpha: Vec<BigInt>,
    #[serde(with = "crate::report::bigint_vec")]
    initial: Vec<BigInt>,
}

impl RecurrenceSeq {
    pub fn new(alpha: Vec<BigInt>, initial: Vec<BigInt>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidArgument("recurrence order must be positive".into()));
        }
        if alpha.len() != initial.len() {
            return Err(Error::DimensionMismatch { expected: alpha.len(), found: initial.len() });
        }
        if alpha[0].is_zero() {
            return Err(Error::InvalidArgument("alpha_0 must be nonzero".into()));
        }
        Ok(RecurrenceSeq { alpha, initial })
    }

    /// `u_n = <A^n v, h>` with the characteristic recurrence of `a`.
    pub fn from_orbit(a: &IntMatrix, v: &[BigInt], h: &[BigInt]) -> Result<Self> {
        let d = a.dim();
        if v.len() != d || h.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: v.len().min(h.len()) });
        }
        let mut x = v.to_vec();
        let mut initial = Vec::with_capacity(d);
        for _ in 0..d {
            initial.push(x.iter().zip(h).map(|(p, q)| p * q).sum());
            x = a.mul_vec(&x);
        }
        Self::new(recurrence_coefficients(a), initial)
    }

    pub fn order(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[BigInt] {
        &self.alpha
    }

    pub fn initial(&self) -> &[BigInt] {
        &self.initial
    }

    /// The first `n` terms.
    pub fn terms(&self, n: usize) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(n);
        self.for_each_term(n, |_, t| out.push(t.clone()));
        out
    }

    fn for_each_term(&self, n: usize, mut f: impl FnMut(usize, &BigInt)) {
        let d = self.order();
        let mut window: Vec<BigInt> = self.initial.clone();
        for i in 0..n {
            f(i, &window[0]);
            let next: BigInt = self.alpha.iter().zip(&window).map(|(a, x)| a * x).sum();
            window.rotate_left(1);
            window[d - 1] = next;
        }
    }

    fn residues(&self, n: usize, p: u64) -> Vec<u64> {
        let modp = |x: &BigInt| -> u64 {
            let r = x % BigInt::from(p);
            let r = if r.is_negative() { r + p } else { r };
            u64::try_from(r).expect("reduced")
        };
        let alpha: Vec<u128> = self.alpha.iter().map(|a| modp(a) as u128).collect();
        let mut window: Vec<u128> = self.initial.iter().map(|x| modp(x) as u128).collect();
        let d = self.order();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(window[0] as u64);
            let next = alpha.iter().zip(&window).fold(0u128, |acc, (a, x)| (acc + a * x) % p as u128);
            window.rotate_left(1);
            window[d - 1] = next;
        }
        out
    }
}

/// Largest number of terms [`multiplicity_diagnostic`] accepts.
pub const MAX_DIAGNOSTIC_TERMS: usize = 100_000;

/// Number of pairs `i < j < n` with `u_i = u_j`.
///
/// Terms are first grouped by residues modulo two large primes (cheap even
/// when the terms are huge); only candidates sharing a fingerprint are
/// compared as exact integers.
pub fn multiplicity_diagnostic(seq: &RecurrenceSeq, n: usize) -> Result<u64> {
    if n > MAX_DIAGNOSTIC_TERMS {
        return Err(Error::InvalidArgument(format!("at most {MAX_DIAGNOSTIC_TERMS} terms are supported")));
    }
    const P1: u64 = (1 << 61) - 1;
    const P2: u64 = (1 << 61) - 31;
    let (r1, r2) = (seq.residues(n, P1), seq.residues(n, P2));
    let mut buckets: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for i in 0..n {
        buckets.entry((r1[i], r2[i])).or_default().push(i);
    }
    let candidates: Vec<bool> = {
        let mut c = vec![false; n];
        for idx in buckets.values().filter(|b| b.len() > 1) {
            idx.iter().for_each(|&i| c[i] = true);
        }
        c
    };
    if !candidates.iter().any(|&c| c) {
        return Ok(0);
    }
    let mut exact: HashMap<BigInt, u64> = HashMap::new();
    seq.for_each_term(n, |i, t| {
        if candidates[i] {
            *exact.entry(t.clone()).or_default() += 1;
        }
    });
    Ok(exact.values().map(|&c| c * (c - 1) / 2).sum())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitOptions {
    /// The start point is an exact dyadic rational: its orbit mod `2^P` is
    /// exact at any precision, so the bit policy does not apply.
    pub exact_dyadic: bool,
}

/// `x_0, A x_0, ..., A^(n-1) x_0 mod 1`, computed exactly in fixed point and
/// returned as 64-bit snapshots.
pub fn orbit_mod1(a: &IntMatrix, x0: &FixedPointTorusPoint, n: usize, opts: OrbitOptions) -> Result<Vec<TorusPoint>> {
    if a.dim() != x0.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: x0.dim() });
    }
    if !opts.exact_dyadic {
        let need = required_bits(a, n as u64);
        if (x0.bits() as u64) < need {
            return Err(Error::PrecisionShortfall { required_bits: need, available_bits: x0.bits() as u64 });
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut x = x0.clone();
    for i in 0..n {
        if i > 0 {
            x = x.apply(a)?;
        }
        out.push(x.leading());
    }
    Ok(out)
}

/// All nonzero `h` with `|h|_inf <= bound` in `r` variables, in
/// lexicographic order.
pub fn frequency_box(r: usize, bound: i64) -> Vec<Vec<i64>> {
    let side = (2 * bound + 1) as usize;
    let total = side.pow(r as u32);
    (0..total)
        .map(|mut idx| {
            let mut h = vec![0i64; r];
            for slot in h.iter_mut().rev() {
                *slot = (idx % side) as i64 - bound;
                idx /= side;
            }
            h
        })
        .filter(|h| h.iter().any(|&x| x != 0))
        .collect()
}

/// `|N^-1 sum_n e(<h, x_n>)|` for one frequency.
pub fn weyl_sum(points: &[TorusPoint], h: &[i64]) -> f64 {
    let s: num_complex::Complex<f64> = points.iter().map(|x| e_phase(x.phase(h))).sum();
    s.norm() / points.len() as f64
}

/// Largest Weyl sum over nonzero `|h|_inf <= bound` and the maximizing `h`
/// (the first in lexicographic order on ties).
pub fn weyl_sums(points: &[TorusPoint], bound: i64) -> Result<(f64, Vec<i64>)> {
    if points.is_empty() || bound < 1 {
        return Err(Error::InvalidArgument("need at least one point and H >= 1".into()));
    }
    let r = points[0].dim();
    let hs = frequency_box(r, bound);
    let sums: Vec<f64> = hs.par_iter().map(|h| weyl_sum(points, h)).collect();
    let (best, _) = sums
        .iter()
        .enumerate()
        .fold((0usize, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    Ok((sums[best], hs[best].clone()))
}

/// Fraction of the points with `<h, x_n> mod 1` in `[0, 1/(2k)]`.
pub fn interval_frequency(points: &[TorusPoint], h: &[i64], k: u64) -> f64 {
    if points.is_empty() || k == 0 {
        return f64::NAN;
    }
    let limit = (u64::MAX / (2 * k)) as u128 + 1;
    let hits = points.iter().filter(|x| (x.phase(h) as u128) <= limit).count();
    hits as f64 / points.len() as f64
}

/// `x_(kn + l)` for `n >= 0`.
pub fn subsample(points: &[TorusPoint], k: usize, l: usize) -> Vec<TorusPoint> {
    points.iter().skip(l).step_by(k.max(1)).cloned().collect()
}

/// Integer representative of a rational direction `v` (for orbits `omega v`).
pub fn integer_direction(v: &RatVector) -> IntVector {
    primitive_part(&v.primitive_integer())
}
