//! Lyapunov exponents of the spectral cocycle.
//!
//! [`mc_exponent`] estimates the almost-everywhere exponent of the essential
//! cocycle by Monte Carlo over starting points; [`pointwise_upper_exponent`]
//! follows one exact fixed-point orbit of the full cocycle.

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundCertificate, BoundMethod};
use crate::cocycle::{build_symbol, essential_symbol, CMatrix, SymbolMatrix};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, MinimalSubspace};
use crate::rng::{mean_and_std_error, stream, uniform_torus};
use crate::substitution::Substitution;
use crate::torus::{required_bits, FixedPointTorusPoint, TorusPoint, WrappingMatrix};

/// Running Neumaier-compensated sum.
#[derive(Clone, Copy, Debug, Default)]
struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// A product `M_n ... M_1` stored as a unit-Frobenius matrix and the log of
/// the discarded scale.
#[derive(Clone, Debug)]
pub struct RenormalizedProduct {
    pub matrix: CMatrix,
    log_scale: Accumulator,
}

impl RenormalizedProduct {
    pub fn identity(dim: usize) -> Self {
        RenormalizedProduct { matrix: CMatrix::identity(dim), log_scale: Accumulator::default() }
    }

    /// Left-multiplies by `m` and renormalizes.
    pub fn push(&mut self, m: &CMatrix) {
        let mut next = m * &self.matrix;
        let norm = next.frobenius();
        if norm > 0.0 && norm.is_finite() {
            next.scale(1.0 / norm);
            self.log_scale.add(norm.ln());
        } else {
            self.log_scale.add(f64::NEG_INFINITY);
        }
        self.matrix = next;
    }

    /// `log || product ||_F`.
    pub fn log_norm(&self) -> f64 {
        self.log_scale.value() + self.matrix.frobenius().ln()
    }
}

/// `M(E^(n-1) s) ... M(s)` kept renormalized after every step.
pub fn renormalized_product(sym: &SymbolMatrix, e: &IntMatrix, s: &TorusPoint, n: usize) -> Result<RenormalizedProduct> {
    check_dims(sym, e, s.dim())?;
    let w = WrappingMatrix::new(e);
    let mut x = s.clone();
    let mut acc = RenormalizedProduct::identity(sym.dim());
    for i in 0..n {
        if i > 0 {
            x = w.apply(&x);
        }
        acc.push(&sym.eval_unchecked(&x));
    }
    Ok(acc)
}

fn check_dims(sym: &SymbolMatrix, e: &IntMatrix, r: usize) -> Result<()> {
    if e.dim() != sym.num_vars() {
        return Err(Error::DimensionMismatch { expected: sym.num_vars(), found: e.dim() });
    }
    if r != sym.num_vars() {
        return Err(Error::DimensionMismatch { expected: sym.num_vars(), found: r });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub k: u32,
    pub bound: f64,
    pub method: BoundMethod,
}

impl From<&BoundCertificate> for UpperBound {
    fn from(c: &BoundCertificate) -> Self {
        UpperBound { k: c.power, bound: c.bound, method: c.method }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_steps: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub certified_upper_bounds: Vec<UpperBound>,
}

impl LyapunovEstimate {
    /// Smallest attached bound from an exact method.
    pub fn best_certified(&self) -> Option<&UpperBound> {
        self.certified_upper_bounds
            .iter()
            .filter(|b| b.method.is_rigorous() || b.method == BoundMethod::MajorantGrid)
            .min_by(|a, b| a.bound.total_cmp(&b.bound))
    }

    /// Whether the estimate sits below the best bound up to three standard
    /// errors; `None` without bounds.
    pub fn consistent_with_bounds(&self) -> Option<bool> {
        self.best_certified().map(|b| self.value <= b.bound + 3.0 * self.std_error)
    }
}

/// Monte Carlo estimate of the essential exponent of `zeta` on `v`.
pub fn mc_exponent(
    zeta: &Substitution,
    v: &MinimalSubspace,
    n_steps: usize,
    n_samples: usize,
    seed: u64,
) -> Result<LyapunovEstimate> {
    let sym = essential_symbol(&build_symbol(zeta), v)?;
    mc_exponent_symbol(&sym, &v.restriction, n_steps, n_samples, seed)
}

/// Monte Carlo estimate for an arbitrary symbol and base map `E`.
pub fn mc_exponent_symbol(
    sym: &SymbolMatrix,
    e: &IntMatrix,
    n_steps: usize,
    n_samples: usize,
    seed: u64,
) -> Result<LyapunovEstimate> {
    if n_steps < 10 {
        return Err(Error::InvalidArgument("at least 10 steps are required".into()));
    }
    if n_samples < 2 {
        return Err(Error::InvalidArgument("at least 2 samples are required".into()));
    }
    check_dims(sym, e, sym.num_vars())?;
    if e.det().is_zero() {
        return Err(Error::InvalidArgument("base map is singular".into()));
    }
    let values: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let s = uniform_torus(&mut stream(seed, i as u64), sym.num_vars());
            let p = renormalized_product(sym, e, &s, n_steps).expect("dimensions checked");
            p.log_norm() / n_steps as f64
        })
        .collect();
    let (value, std_error) = mean_and_std_error(&values);
    Ok(LyapunovEstimate { value, std_error, n_steps, n_samples, seed, certified_upper_bounds: Vec::new() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointwiseOptions {
    /// Fraction of the final steps over which the maximum is taken.
    pub tail_fraction: f64,
    /// Treat the start point as an exact dyadic rational, so the orbit is
    /// computed without error at any precision and the bit policy is skipped.
    pub exact_dyadic: bool,
}

impl Default for PointwiseOptions {
    fn default() -> Self {
        PointwiseOptions { tail_fraction: 0.25, exact_dyadic: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointwiseExponent {
    pub value: f64,
    pub steps: usize,
    pub window: usize,
    pub precision_bits: u32,
    pub exact_dyadic: bool,
}

/// Tail maximum of `(1/n) log || M(w, n) ||` along the exact orbit of `w`
/// under `S^t`, for the full cocycle of `zeta`.
pub fn pointwise_upper_exponent(
    zeta: &Substitution,
    w: &FixedPointTorusPoint,
    n: usize,
    opts: PointwiseOptions,
) -> Result<PointwiseExponent> {
    let sym = build_symbol(zeta);
    let e = zeta.substitution_matrix().transpose();
    if w.dim() != sym.num_vars() {
        return Err(Error::DimensionMismatch { expected: sym.num_vars(), found: w.dim() });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("at least one step is required".into()));
    }
    if !(opts.tail_fraction > 0.0 && opts.tail_fraction <= 1.0) {
        return Err(Error::InvalidArgument("tail fraction must lie in (0, 1]".into()));
    }
    if !opts.exact_dyadic {
        let need = required_bits(&e, n as u64);
        if (w.bits() as u64) < need {
            return Err(Error::PrecisionShortfall { required_bits: need, available_bits: w.bits() as u64 });
        }
    }
    let window = ((n as f64 * opts.tail_fraction).ceil() as usize).clamp(1, n);
    let mut x = w.clone();
    let mut acc = RenormalizedProduct::identity(sym.dim());
    let mut best = f64::NEG_INFINITY;
    for step in 1..=n {
        if step > 1 {
            x = x.apply(&e)?;
        }
        acc.push(&sym.eval_unchecked(&x.leading()));
        if step > n - window {
            best = best.max(acc.log_norm() / step as f64);
        }
    }
    Ok(PointwiseExponent {
        value: best,
        steps: n,
        window,
        precision_bits: w.bits(),
        exact_dyadic: opts.exact_dyadic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{best_cleared_bound, jensen_bound};
    use crate::cocycle::cocycle_product;
    use crate::linalg::{cyclic_subspace, RatVector};
    use crate::substitution::{make_family, FamilyParams};
    use num_bigint::{BigInt, BigUint};
    use num_rational::BigRational;

    fn fib() -> Substitution {
        Substitution::from_strs(&["01", "0"]).unwrap()
    }

    fn ones_subspace(z: &Substitution) -> MinimalSubspace {
        let a = z.substitution_matrix().transpose();
        cyclic_subspace(&a, &RatVector::ones(z.alphabet_size())).unwrap()
    }

    #[test]
    fn renormalization_matches_direct_product() {
        let z = make_family(&FamilyParams::ZetaM { m: 3 }).unwrap();
        let sym = build_symbol(&z);
        let e = z.substitution_matrix().transpose();
        let s = TorusPoint::from_f64(&[0.31, 0.77, 0.05]);
        for n in [1usize, 7, 20] {
            let direct = cocycle_product(&sym, &e, &s, n).unwrap();
            let mut renorm = renormalized_product(&sym, &e, &s, n).unwrap();
            let scale = renorm.log_scale.value().exp();
            renorm.matrix.scale(scale);
            let rel = renorm.matrix.max_abs_diff(&direct) / direct.frobenius();
            assert!(rel < 1e-6, "n = {n}: {rel}");
        }
        // log norms agree beyond the range of direct products too
        let p = renormalized_product(&sym, &e, &s, 50).unwrap();
        let direct = cocycle_product(&sym, &e, &s, 50).unwrap();
        assert!((p.log_norm() - direct.frobenius().ln()).abs() < 1e-6);
    }

    #[test]
    fn essential_cocycle_follows_restriction() {
        let z = make_family(&FamilyParams::SigmaM { m: 2 }).unwrap();
        let v = ones_subspace(&z);
        let full = build_symbol(&z);
        let ess = essential_symbol(&full, &v).unwrap();
        let s = TorusPoint::from_f64(&[0.123, 0.456]);
        // lattice coordinates s map to the ambient point G s
        let g: Vec<Vec<i64>> = v.lattice_basis.iter().map(|c| c.iter().map(|x| x.try_into().unwrap()).collect()).collect();
        let ambient: Vec<u64> = (0..3)
            .map(|i| (0..v.rank).fold(0u64, |acc, j| acc.wrapping_add((g[j][i] as u64).wrapping_mul(s.raw()[j]))))
            .collect();
        let xi = TorusPoint::from_raw(ambient);
        let lhs = cocycle_product(&ess, &v.restriction, &s, 6).unwrap();
        let rhs = cocycle_product(&full, &z.substitution_matrix().transpose(), &xi, 6).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-9 * rhs.frobenius());
    }

    #[test]
    fn rank_one_symbol() {
        // M(s) = u w(s)^t with u = (1,1), w = (1, e(s)); the product norm is
        // |u| |w| prod |1 + e(2^i s)|, so the rate is the Mahler measure of
        // 1 + z, which is 0, except at the fixed point s = 0 where it is log 2
        let z = Substitution::from_strs(&["01", "01"]).unwrap();
        let v = ones_subspace(&z);
        let sym = essential_symbol(&build_symbol(&z), &v).unwrap();
        let p = renormalized_product(&sym, &v.restriction, &TorusPoint::zero(1), 20).unwrap();
        assert!((p.log_norm() - 20.0 * 2f64.ln()).abs() < 1e-12);
        let est = mc_exponent(&z, &v, 40, 400, 1).unwrap();
        // bias from the boundary factors |u| |w| = 2 is log(2) / n
        assert!((est.value - 2f64.ln() / 40.0).abs() < 4.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn argument_checks() {
        let z = fib();
        let v = ones_subspace(&z);
        assert!(mc_exponent(&z, &v, 5, 10, 0).is_err());
        assert!(mc_exponent(&z, &v, 10, 1, 0).is_err());
    }

    #[test]
    fn deterministic_and_seed_stable() {
        let z = fib();
        let v = ones_subspace(&z);
        let a = mc_exponent(&z, &v, 200, 200, 5).unwrap();
        let b = mc_exponent(&z, &v, 200, 200, 5).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let c = mc_exponent(&z, &v, 200, 200, 6).unwrap();
        let combined = (a.std_error.powi(2) + c.std_error.powi(2)).sqrt();
        assert!((a.value - c.value).abs() <= 3.0 * combined + 1e-3);
    }

    #[test]
    fn zeta20_below_cleared_bound() {
        let z = make_family(&FamilyParams::ZetaM { m: 20 }).unwrap();
        let v = ones_subspace(&z);
        let mut est = mc_exponent(&z, &v, 200, 64, 11).unwrap();
        let sym = essential_symbol(&build_symbol(&z), &v).unwrap();
        let cert = best_cleared_bound(&sym, 1).unwrap();
        est.certified_upper_bounds.push((&cert).into());
        est.certified_upper_bounds.push((&jensen_bound(&z, &v, 1).unwrap()).into());
        assert_eq!(est.best_certified().unwrap().bound, 0.5 * 40f64.ln());
        assert_eq!(est.consistent_with_bounds(), Some(true));
    }

    #[test]
    fn origin_gives_perron_rate() {
        let z = fib();
        let w = FixedPointTorusPoint::zero(64, 2).unwrap();
        let opts = PointwiseOptions { exact_dyadic: true, ..Default::default() };
        let r = pointwise_upper_exponent(&z, &w, 2000, opts).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(r.value >= golden.ln() - 1e-12);
        assert!(r.value - golden.ln() < 1e-3, "{}", r.value);
    }

    #[test]
    fn precision_policy() {
        let z = fib();
        let w = FixedPointTorusPoint::zero(128, 2).unwrap();
        match pointwise_upper_exponent(&z, &w, 1000, PointwiseOptions::default()) {
            Err(Error::PrecisionShortfall { required_bits, available_bits }) => {
                assert_eq!(required_bits, 2064);
                assert_eq!(available_bits, 128);
            }
            other => panic!("{other:?}"),
        }
        let w = FixedPointTorusPoint::zero(2064, 2).unwrap();
        assert!(pointwise_upper_exponent(&z, &w, 1000, PointwiseOptions::default()).is_ok());
    }

    #[test]
    fn periodic_orbit_matches_period_product() {
        // (1/4, 1/2) is fixed-period under the Fibonacci map mod 1
        let z = fib();
        let e = z.substitution_matrix().transpose();
        let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        let w = FixedPointTorusPoint::from_rationals(64, &[q(1, 4), q(1, 2)]).unwrap();
        let mut x = w.clone();
        let mut period = 0;
        loop {
            x = x.apply(&e).unwrap();
            period += 1;
            if x == w {
                break;
            }
        }
        let sym = build_symbol(&z);
        let p = cocycle_product(&sym, &e, &w.leading(), period).unwrap();
        let mut pk = crate::cocycle::CMatrix::identity(2);
        let reps = 400;
        let mut log = 0.0;
        for _ in 0..reps {
            pk = &p * &pk;
            let n = pk.frobenius();
            log += n.ln();
            pk.scale(1.0 / n);
        }
        let expect = log / (reps * period) as f64;
        let opts = PointwiseOptions { exact_dyadic: true, ..Default::default() };
        let r = pointwise_upper_exponent(&z, &w, 4000, opts).unwrap();
        assert!((r.value - expect).abs() < 2e-3, "{} vs {expect}", r.value);
    }

    #[test]
    fn random_orbits_do_not_exceed_average() {
        let z = fib();
        let v = ones_subspace(&z);
        let chi = mc_exponent(&z, &v, 500, 200, 2).unwrap();
        let n = 2000;
        let bits = required_bits(&z.substitution_matrix().transpose(), n as u64) as u32;
        let mut below = 0;
        for i in 0..10u64 {
            let omega: BigUint = crate::rng::uniform_fraction(&mut stream(77, i), bits);
            let w = FixedPointTorusPoint::scaled(bits, &omega, &[BigInt::from(1), BigInt::from(1)]).unwrap();
            let r = pointwise_upper_exponent(&z, &w, n, PointwiseOptions::default()).unwrap();
            if r.value <= chi.value + 0.05 {
                below += 1;
            }
        }
        assert!(below >= 8, "{below}/10");
    }
}
