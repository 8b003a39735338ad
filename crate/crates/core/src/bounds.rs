//! Upper bounds for the essential Lyapunov exponent.
//!
//! By Jensen and Parseval, `chi <= (1/2k) log c` where `c` is the constant
//! term of `|| M(., k) ||^2` read as a Laurent polynomial. Multiplying each
//! entry by factors `z^w - 1` leaves the integral of the logarithm unchanged
//! (their logarithmic Mahler measure is zero), and often lowers `c`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cocycle::{cocycle_product, SymbolMatrix};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{IntMatrix, MinimalSubspace};
use crate::rng::{mean_and_std_error, stream, uniform_torus};
use crate::substitution::Substitution;
use crate::torus::{e_phase, TorusPoint};

/// Largest number of proposed clearings whose subsets are searched.
pub const MAX_PROPOSALS: usize = 8;

/// The factor `|z^(order * monomial) - 1|^2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClearingFactor {
    pub monomial: Vec<i64>,
    pub order: u64,
}

impl ClearingFactor {
    pub fn exponent(&self) -> Vec<i64> {
        self.monomial.iter().map(|w| w * self.order as i64).collect()
    }

    fn validate(&self, num_vars: usize) -> Result<()> {
        if self.monomial.len() != num_vars {
            return Err(Error::DimensionMismatch { expected: num_vars, found: self.monomial.len() });
        }
        if self.order == 0 || self.monomial.iter().all(|&w| w == 0) {
            return Err(Error::InvalidArgument(format!("clearing {self:?} is trivial")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundMethod {
    #[serde(rename = "jensen")]
    Jensen,
    #[serde(rename = "cleared")]
    Cleared,
    #[serde(rename = "majorant-grid")]
    MajorantGrid,
    #[serde(rename = "monte-carlo")]
    MonteCarlo,
}

impl BoundMethod {
    /// Exact methods may back a certified decision.
    pub fn is_rigorous(self) -> bool {
        matches!(self, BoundMethod::Jensen | BoundMethod::Cleared)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    /// Upper bound (or estimate, for Monte Carlo) for the exponent.
    pub bound: f64,
    /// Exact constant term behind `bound = log(constant_term) / (2 power)`.
    #[serde(with = "crate::report::opt_bigint_string")]
    pub constant_term: Option<BigInt>,
    pub clearings: Vec<ClearingFactor>,
    pub method: BoundMethod,
    pub power: u32,
    pub std_error: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

impl BoundCertificate {
    fn exact(constant: BigInt, clearings: Vec<ClearingFactor>, method: BoundMethod, power: u32) -> Self {
        BoundCertificate {
            bound: ln_bigint(&constant) / (2.0 * power as f64),
            constant_term: Some(constant),
            clearings,
            method,
            power,
            std_error: None,
            samples: None,
            seed: None,
        }
    }
}

/// Natural logarithm of a positive integer of any size.
pub fn ln_bigint(x: &BigInt) -> f64 {
    if !x.is_positive() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `sum_{b,c} |M_bc|^2` as an exact Laurent polynomial.
pub fn gram_polynomial(sym: &SymbolMatrix) -> LaurentPoly {
    let d = sym.dim();
    let mut g = LaurentPoly::zero(sym.num_vars());
    for b in 0..d {
        for c in 0..d {
            g = g.add(&sym.entry_poly(b, c).abs_sq());
        }
    }
    g
}

/// Constant term of the Gram polynomial: the sum of squared multiplicities.
pub fn gram_constant_term(sym: &SymbolMatrix) -> BigInt {
    let d = sym.dim();
    (0..d)
        .flat_map(|b| (0..d).map(move |c| (b, c)))
        .flat_map(|(b, c)| sym.entry(b, c).iter().map(|t| BigInt::from(t.mult) * t.mult))
        .sum()
}

/// Symbol of `zeta^k` read on the minimal subspace `v`.
pub fn power_symbol(zeta: &Substitution, v: &MinimalSubspace, k: u32) -> Result<SymbolMatrix> {
    let zk = zeta.power(k)?;
    crate::cocycle::essential_symbol(&crate::cocycle::build_symbol(&zk), v)
}

/// Plain Jensen + Parseval bound for `zeta^k` on `v`.
pub fn jensen_bound(zeta: &Substitution, v: &MinimalSubspace, k: u32) -> Result<BoundCertificate> {
    let sym = power_symbol(zeta, v, k)?;
    Ok(BoundCertificate::exact(gram_constant_term(&sym), Vec::new(), BoundMethod::Jensen, k))
}

fn primitive_step(w: &[i64]) -> (Vec<i64>, u64) {
    let g = w.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    let mut p: Vec<i64> = w.iter().map(|x| x / g).collect();
    if p.iter().find(|&&x| x != 0).map_or(false, |&x| x < 0) {
        p.iter_mut().for_each(|x| *x = -*x);
    }
    (p, g.unsigned_abs())
}

/// Steps of maximal arithmetic progressions (at least two terms) among the
/// distinct frequencies of each entry, normalized to a primitive monomial and
/// an order, ranked by the total number of terms they cover.
pub fn detect_geometric_runs(sym: &SymbolMatrix) -> Vec<ClearingFactor> {
    let d = sym.dim();
    let mut score: BTreeMap<ClearingFactor, u64> = BTreeMap::new();
    for b in 0..d {
        for c in 0..d {
            let freqs: Vec<&Vec<i64>> = sym.entry(b, c).iter().map(|t| &t.freq).collect();
            if freqs.len() < 2 {
                continue;
            }
            let diffs: Vec<Vec<i64>> =
                freqs.windows(2).map(|w| w[1].iter().zip(w[0]).map(|(x, y)| x - y).collect()).collect();
            let mut i = 0;
            while i < diffs.len() {
                let mut j = i + 1;
                while j < diffs.len() && diffs[j] == diffs[i] {
                    j += 1;
                }
                let (p, a) = primitive_step(&diffs[i]);
                *score.entry(ClearingFactor { monomial: p, order: a }).or_default() += (j - i + 1) as u64;
                i = j;
            }
        }
    }
    let mut ranked: Vec<(ClearingFactor, u64)> = score.into_iter().collect();
    ranked.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    ranked.into_iter().take(MAX_PROPOSALS).map(|(c, _)| c).collect()
}

/// Coefficients of the Gram polynomial, computed on demand.
struct GramCoefficients<'a> {
    sym: &'a SymbolMatrix,
    index: Vec<HashMap<&'a [i64], u64>>,
    cache: HashMap<Vec<i64>, BigInt>,
}

impl<'a> GramCoefficients<'a> {
    fn new(sym: &'a SymbolMatrix) -> Self {
        let d = sym.dim();
        let index = (0..d * d)
            .map(|k| sym.entry(k / d, k % d).iter().map(|t| (&t.freq[..], t.mult)).collect())
            .collect();
        GramCoefficients { sym, index, cache: HashMap::new() }
    }

    /// Coefficient of `z^delta` in `sum |P_bc|^2`: `sum m(f + delta) m(f)`.
    fn get(&mut self, delta: &[i64]) -> BigInt {
        if let Some(v) = self.cache.get(delta) {
            return v.clone();
        }
        let d = self.sym.dim();
        let mut total = BigInt::zero();
        let mut shifted = vec![0i64; delta.len()];
        for k in 0..d * d {
            for t in self.sym.entry(k / d, k % d) {
                for (s, (f, dl)) in shifted.iter_mut().zip(t.freq.iter().zip(delta)) {
                    *s = f + dl;
                }
                if let Some(&m) = self.index[k].get(&shifted[..]) {
                    total += BigInt::from(m) * t.mult;
                }
            }
        }
        self.cache.insert(delta.to_vec(), total.clone());
        total
    }
}

fn clearing_product(clearings: &[ClearingFactor], num_vars: usize) -> LaurentPoly {
    clearings.iter().fold(LaurentPoly::one(num_vars), |acc, c| {
        acc.mul(&LaurentPoly::monomial_minus_one(&c.exponent()))
    })
}

/// Entries multiplied by the clearing product: `Q_bc = P_bc prod (u - 1)`.
pub fn cleared_entries(sym: &SymbolMatrix, clearings: &[ClearingFactor]) -> Result<Vec<LaurentPoly>> {
    for c in clearings {
        c.validate(sym.num_vars())?;
    }
    let u = clearing_product(clearings, sym.num_vars());
    let d = sym.dim();
    Ok((0..d * d).map(|k| sym.entry_poly(k / d, k % d).mul(&u)).collect())
}

/// Bound from the cleared Gram polynomial `sum |Q_bc|^2`, for a symbol of
/// `zeta^k`. The constant term is computed twice, once from the expanded
/// entries and once from Gram coefficients, and the two must agree.
pub fn cleared_jensen_bound(sym: &SymbolMatrix, clearings: &[ClearingFactor], k: u32) -> Result<BoundCertificate> {
    if k == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let q = cleared_entries(sym, clearings)?;
    let constant: BigInt = q.iter().map(LaurentPoly::sum_sq_coeffs).sum();
    let dprod = clearing_product(clearings, sym.num_vars()).abs_sq();
    let mut gram = GramCoefficients::new(sym);
    let via_gram: BigInt = dprod.terms().map(|(e, c)| c * gram.get(&e.iter().map(|x| -x).collect::<Vec<_>>())).sum();
    if via_gram != constant {
        let d = sym.dim();
        let bad = (0..d * d)
            .find(|&i| {
                let p = sym.entry_poly(i / d, i % d);
                q[i].abs_sq() != p.abs_sq().mul(&dprod)
            })
            .unwrap_or(0);
        return Err(Error::ClearingInvalid {
            row: bad / d,
            col: bad % d,
            reason: format!("cleared constant {constant} disagrees with Gram expansion {via_gram}"),
        });
    }
    if constant.is_zero() {
        return Err(Error::Internal("cleared Gram polynomial vanishes".into()));
    }
    let method = if clearings.is_empty() { BoundMethod::Jensen } else { BoundMethod::Cleared };
    Ok(BoundCertificate::exact(constant, clearings.to_vec(), method, k))
}

/// Smallest cleared constant over all subsets of the detected proposals
/// (the empty subset is the plain Jensen bound).
pub fn best_cleared_bound(sym: &SymbolMatrix, k: u32) -> Result<BoundCertificate> {
    let proposals = detect_geometric_runs(sym);
    let r = sym.num_vars();
    let mut gram = GramCoefficients::new(sym);
    let mut best: Option<(BigInt, u32)> = None;
    for mask in 0u32..(1 << proposals.len()) {
        let chosen: Vec<ClearingFactor> =
            (0..proposals.len()).filter(|i| mask >> i & 1 == 1).map(|i| proposals[i].clone()).collect();
        let dprod = clearing_product(&chosen, r).abs_sq();
        let c: BigInt = dprod.terms().map(|(e, c)| c * gram.get(&e.iter().map(|x| -x).collect::<Vec<_>>())).sum();
        let better = match &best {
            None => true,
            Some((b, bm)) => c < *b || (c == *b && mask.count_ones() < bm.count_ones()),
        };
        if better {
            best = Some((c, mask));
        }
    }
    let (_, mask) = best.expect("the empty subset is always evaluated");
    let chosen: Vec<ClearingFactor> =
        (0..proposals.len()).filter(|i| mask >> i & 1 == 1).map(|i| proposals[i].clone()).collect();
    cleared_jensen_bound(sym, &chosen, k)
}

/// A term `coeff |P| |Q|`, bounded in the integral by Cauchy–Schwarz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossTerm {
    #[serde(with = "crate::report::bigint_string")]
    pub coeff: BigInt,
    pub p: LaurentPoly,
    pub q: LaurentPoly,
}

/// Pointwise upper bound for the cleared Gram function:
/// `poly + sum coeff |P| |Q|` with `poly` real-valued.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Majorant {
    pub poly: LaurentPoly,
    pub cross: Vec<CrossTerm>,
}

fn ceil_sqrt(n: &BigInt) -> BigInt {
    let s = n.sqrt();
    if &s * &s < *n {
        s + 1
    } else {
        s
    }
}

impl Majorant {
    pub fn from_poly(poly: LaurentPoly) -> Self {
        Majorant { poly, cross: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.poly.num_vars()
    }

    pub fn eval(&self, s: &TorusPoint) -> f64 {
        let base = self.poly.eval(s).re;
        let cross: f64 = self
            .cross
            .iter()
            .map(|t| t.coeff.to_f64().unwrap_or(f64::INFINITY) * t.p.eval(s).norm() * t.q.eval(s).norm())
            .sum();
        base + cross
    }

    /// Integer upper bound for the integral: the constant term of `poly`
    /// plus `coeff * ceil(sqrt(|P|_2^2 |Q|_2^2))` per cross term.
    pub fn integral_bound(&self) -> BigInt {
        let cross: BigInt = self
            .cross
            .iter()
            .map(|t| &t.coeff * ceil_sqrt(&(t.p.sum_sq_coeffs() * t.q.sum_sq_coeffs())))
            .sum();
        self.poly.constant_term() + cross
    }
}

/// Cleared majorant for the family `0 -> A2, 1 -> 2B, 2 -> 022` on the
/// subspace with coordinates `(s0, s1)`, where `k` bounds the minority
/// counts of `A` and `B`:
/// `2|z0^m - 1|^2 + 4k|z0^m - 1||z0 - 1| + (4k^2 + 3)|z0 - 1|^2 + |1 + z1|^2 |z0 - 1|^2`.
pub fn binary_words_majorant(m: u32, k: u64) -> (Majorant, Vec<ClearingFactor>) {
    let m = m as i64;
    let k = BigInt::from(k);
    let zm1 = LaurentPoly::monomial_minus_one(&[m, 0]);
    let z1 = LaurentPoly::monomial_minus_one(&[1, 0]);
    let mut one_plus = LaurentPoly::one(2);
    one_plus.add_term(vec![0, 1], BigInt::one());
    let poly = zm1
        .abs_sq()
        .scale(&BigInt::from(2))
        .add(&z1.abs_sq().scale(&(BigInt::from(4) * &k * &k + 3)))
        .add(&one_plus.abs_sq().mul(&z1.abs_sq()));
    let cross = vec![CrossTerm { coeff: BigInt::from(4) * &k, p: zm1, q: z1 }];
    (Majorant { poly, cross }, vec![ClearingFactor { monomial: vec![1, 0], order: 1 }])
}

/// `sum_bc |M_bc(s)|^2 prod |u(s) - 1|^2`, evaluated numerically.
fn cleared_gram_at(sym: &SymbolMatrix, exps: &[Vec<i64>], s: &TorusPoint) -> f64 {
    let m = sym.eval_unchecked(s);
    let d = sym.dim();
    let g: f64 = (0..d).flat_map(|b| (0..d).map(move |c| (b, c))).map(|(b, c)| m.get(b, c).norm_sqr()).sum();
    let clear: f64 = exps
        .iter()
        .map(|w| (e_phase(s.phase(w)) - num_complex::Complex::new(1.0, 0.0)).norm_sqr())
        .product();
    g * clear
}

/// Checks `cleared gram <= majorant` on the grid `{i/n}^r` (`r <= 2`), then
/// bounds the exponent by half the log of the majorant's integral bound.
/// The grid check is evidence, not proof: the method is `majorant-grid`.
pub fn majorant_bound(
    sym: &SymbolMatrix,
    majorant: &Majorant,
    clearings: &[ClearingFactor],
    k: u32,
    grid: usize,
) -> Result<BoundCertificate> {
    let r = sym.num_vars();
    if majorant.num_vars() != r {
        return Err(Error::DimensionMismatch { expected: r, found: majorant.num_vars() });
    }
    if r == 0 || r > 2 {
        return Err(Error::InvalidArgument(format!("grid check supports 1 or 2 variables, got {r}")));
    }
    if grid == 0 || k == 0 {
        return Err(Error::InvalidArgument("grid size and power must be positive".into()));
    }
    for c in clearings {
        c.validate(r)?;
    }
    let exps: Vec<Vec<i64>> = clearings.iter().map(ClearingFactor::exponent).collect();
    let rows = if r == 1 { 1 } else { grid };
    let step = u64::MAX / grid as u64 + 1;
    // worst (excess, point) per row, reduced in row order
    let worst: Vec<Option<(f64, Vec<u64>, f64, f64)>> = (0..rows)
        .into_par_iter()
        .map(|i| {
            let mut w: Option<(f64, Vec<u64>, f64, f64)> = None;
            for j in 0..grid {
                let raw = if r == 1 { vec![j as u64 * step] } else { vec![i as u64 * step, j as u64 * step] };
                let s = TorusPoint::from_raw(raw.clone());
                let g = cleared_gram_at(sym, &exps, &s);
                let maj = majorant.eval(&s);
                let excess = g - maj - 1e-9 * maj.abs().max(1.0);
                if excess > 0.0 && w.as_ref().map_or(true, |x| excess > x.0) {
                    w = Some((excess, raw, g, maj));
                }
            }
            w
        })
        .collect();
    let mut overall: Option<(f64, Vec<u64>, f64, f64)> = None;
    for w in worst.into_iter().flatten() {
        if overall.as_ref().map_or(true, |o| w.0 > o.0) {
            overall = Some(w);
        }
    }
    if let Some((_, raw, gram, maj)) = overall {
        return Err(Error::GridViolation { point: TorusPoint::from_raw(raw).to_f64(), gram, majorant: maj });
    }
    let constant = majorant.integral_bound();
    if !constant.is_positive() {
        return Err(Error::InvalidArgument("majorant integral bound is not positive".into()));
    }
    Ok(BoundCertificate::exact(constant, clearings.to_vec(), BoundMethod::MajorantGrid, k))
}

/// Monte Carlo estimate of `(1/k) int log || M(s, k) ||` with its standard
/// error. Sample `i` draws from stream `(seed, i)`, so the result does not
/// depend on scheduling.
pub fn quadrature_log_norm(
    sym: &SymbolMatrix,
    e: &IntMatrix,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples < 100 {
        return Err(Error::InvalidArgument("at least 100 samples are required".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    if e.dim() != sym.num_vars() {
        return Err(Error::DimensionMismatch { expected: sym.num_vars(), found: e.dim() });
    }
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i as u64);
            let s = uniform_torus(&mut rng, sym.num_vars());
            let m = cocycle_product(sym, e, &s, k).expect("dimensions checked");
            m.frobenius().ln() / k as f64
        })
        .collect();
    Ok(mean_and_std_error(&values))
}

/// Monte Carlo bound wrapped as a certificate.
pub fn monte_carlo_bound(sym: &SymbolMatrix, e: &IntMatrix, k: u32, samples: usize, seed: u64) -> Result<BoundCertificate> {
    let (est, se) = quadrature_log_norm(sym, e, k as usize, samples, seed)?;
    Ok(BoundCertificate {
        bound: est,
        constant_term: None,
        clearings: Vec::new(),
        method: BoundMethod::MonteCarlo,
        power: k,
        std_error: Some(se),
        samples: Some(samples),
        seed: Some(seed),
    })
}

/// Midpoint rule for `int_0^1 log |e(t) - 1|^2 dt` (exact value 0).
pub fn mahler_midpoint(n: usize) -> f64 {
    let terms: Vec<f64> = (0..n)
        .map(|j| {
            let t = (j as f64 + 0.5) / n as f64;
            (4.0 * (std::f64::consts::PI * t).sin().powi(2)).ln()
        })
        .collect();
    crate::rng::compensated_sum(&terms) / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{build_symbol, essential_symbol};
    use crate::linalg::{cyclic_subspace, RatVector};
    use crate::substitution::{make_family, FamilyParams};

    fn essential(z: &Substitution) -> (SymbolMatrix, MinimalSubspace) {
        let a = z.substitution_matrix().transpose();
        let ones = RatVector::from_ints(&vec![1; z.alphabet_size()]);
        let v = cyclic_subspace(&a, &ones).unwrap();
        (essential_symbol(&build_symbol(z), &v).unwrap(), v)
    }

    fn zeta(m: u32) -> Substitution {
        make_family(&FamilyParams::ZetaM { m }).unwrap()
    }

    fn sigma(m: u32) -> Substitution {
        make_family(&FamilyParams::SigmaM { m }).unwrap()
    }

    fn cf(monomial: &[i64], order: u64) -> ClearingFactor {
        ClearingFactor { monomial: monomial.to_vec(), order }
    }

    #[test]
    fn constant_gram_for_rank_one_example() {
        let z = Substitution::from_strs(&["01", "01"]).unwrap();
        let (sym, v) = essential(&z);
        let g = gram_polynomial(&sym);
        assert_eq!(g, LaurentPoly::constant(1, 4.into()));
        let b = jensen_bound(&z, &v, 1).unwrap();
        assert_eq!(b.constant_term, Some(4.into()));
        assert!((b.bound - 2f64.ln()).abs() < 1e-15);
        assert!(detect_geometric_runs(&sym).is_empty());
    }

    #[test]
    fn gram_matches_evaluation_and_is_symmetric() {
        let z = zeta(4);
        let (sym, _) = essential(&z);
        let g = gram_polynomial(&sym);
        assert!(g.is_conjugate_symmetric());
        assert_eq!(g.constant_term(), gram_constant_term(&sym));
        for xi in [[0.1, 0.2, 0.3], [0.77, 0.01, 0.5]] {
            let s = TorusPoint::from_f64(&xi);
            let direct = sym.eval(&s).unwrap().frobenius_sq();
            assert!((g.eval(&s).re - direct).abs() < 1e-9 * direct);
        }
    }

    #[test]
    fn zeta_gram_closed_form() {
        // |(z0^m-1)/(z0-1)|^2 + |(z1^2m-1)/(z1-1)|^2 + |z2+1|^2 + 6
        let m = 5;
        let (sym, _) = essential(&zeta(m));
        let g = gram_polynomial(&sym);
        let geo = |var: usize, n: i64| {
            let mut p = LaurentPoly::zero(3);
            for j in 0..n {
                let mut e = vec![0; 3];
                e[var] = j;
                p.add_term(e, BigInt::one());
            }
            p
        };
        let mut z2p1 = LaurentPoly::one(3);
        z2p1.add_term(vec![0, 0, 1], BigInt::one());
        let expect = geo(0, m as i64)
            .abs_sq()
            .add(&geo(1, 2 * m as i64).abs_sq())
            .add(&z2p1.abs_sq())
            .add(&LaurentPoly::constant(3, 6.into()));
        assert_eq!(g, expect);
    }

    #[test]
    fn zeta_clearing_constants() {
        for m in [3u32, 5, 20] {
            let (sym, _) = essential(&zeta(m));
            let m = m as i64;
            let both = cleared_jensen_bound(&sym, &[cf(&[1, 0, 0], 1), cf(&[0, 1, 0], 1)], 1).unwrap();
            assert_eq!(both.constant_term, Some(40.into()), "m = {m}");
            assert_eq!(both.method, BoundMethod::Cleared);
            let none = cleared_jensen_bound(&sym, &[], 1).unwrap();
            assert_eq!(none.constant_term, Some((3 * m + 8).into()));
            assert_eq!(none.method, BoundMethod::Jensen);
            let e0 = cleared_jensen_bound(&sym, &[cf(&[1, 0, 0], 1)], 1).unwrap();
            assert_eq!(e0.constant_term, Some((4 * m + 18).into()));
            let e1 = cleared_jensen_bound(&sym, &[cf(&[0, 1, 0], 1)], 1).unwrap();
            assert_eq!(e1.constant_term, Some((2 * m + 18).into()));
        }
    }

    #[test]
    fn best_subset_for_zeta() {
        let (sym, _) = essential(&zeta(20));
        let props = detect_geometric_runs(&sym);
        assert!(props.contains(&cf(&[1, 0, 0], 1)));
        assert!(props.contains(&cf(&[0, 1, 0], 1)));
        let best = best_cleared_bound(&sym, 1).unwrap();
        assert_eq!(best.constant_term, Some(40.into()));
        assert!((best.bound - 0.5 * 40f64.ln()).abs() < 1e-14);
        // for small m the uncleared constant 3m + 8 wins
        let (sym3, _) = essential(&zeta(3));
        assert_eq!(best_cleared_bound(&sym3, 1).unwrap().constant_term, Some(17.into()));
    }

    #[test]
    fn sigma_clearing_constant() {
        for m in [1u32, 2, 8, 10] {
            let (sym, v) = essential(&sigma(m));
            assert_eq!(v.rank, 2);
            let props = detect_geometric_runs(&sym);
            // for m = 1 every entry is too short to show a step-2 run
            if m >= 2 {
                assert!(props.contains(&cf(&[1, 0], 2)), "m = {m}: {props:?}");
            }
            let c = cleared_jensen_bound(&sym, &[cf(&[1, 0], 2)], 1).unwrap();
            assert_eq!(c.constant_term, Some(16.into()));
            let best = best_cleared_bound(&sym, 1).unwrap();
            assert!(best.constant_term.clone().unwrap() <= 16.into());
            let plain = cleared_jensen_bound(&sym, &[], 1).unwrap();
            assert_eq!(plain.constant_term, Some((6 * m as i64 + 4).into()));
        }
    }

    #[test]
    fn cleared_polynomial_identity() {
        let (sym, _) = essential(&zeta(4));
        let cl = [cf(&[1, 0, 0], 1), cf(&[0, 1, 0], 1)];
        let q = cleared_entries(&sym, &cl).unwrap();
        let lhs = q.iter().fold(LaurentPoly::zero(3), |acc, p| acc.add(&p.abs_sq()));
        let dprod = cl.iter().fold(LaurentPoly::one(3), |acc, c| {
            acc.mul(&LaurentPoly::abs_sq_monomial_minus_one(&c.exponent()))
        });
        assert_eq!(lhs, gram_polynomial(&sym).mul(&dprod));
    }

    #[test]
    fn invalid_clearings() {
        let (sym, _) = essential(&zeta(4));
        assert!(cleared_jensen_bound(&sym, &[cf(&[0, 0, 0], 1)], 1).is_err());
        assert!(cleared_jensen_bound(&sym, &[cf(&[1, 0, 0], 0)], 1).is_err());
        assert!(cleared_jensen_bound(&sym, &[cf(&[1, 0], 1)], 1).is_err());
    }

    #[test]
    fn majorant_checks() {
        let (sym, _) = essential(&sigma(3));
        let cl = [cf(&[1, 0], 2)];
        let exact = gram_polynomial(&sym).mul(&LaurentPoly::abs_sq_monomial_minus_one(&[2, 0]));
        let b = majorant_bound(&sym, &Majorant::from_poly(exact), &cl, 1, 64).unwrap();
        assert_eq!(b.constant_term, Some(16.into()));
        assert_eq!(b.method, BoundMethod::MajorantGrid);
        let zero = Majorant::from_poly(LaurentPoly::zero(2));
        assert!(matches!(majorant_bound(&sym, &zero, &cl, 1, 16), Err(Error::GridViolation { .. })));
    }

    #[test]
    fn binary_words_majorant_constant() {
        for k in 0..4u64 {
            let (maj, _) = binary_words_majorant(40, k);
            assert_eq!(maj.integral_bound(), BigInt::from(8 * k * k + 8 * k + 14));
        }
    }

    #[test]
    fn quadrature() {
        let z = Substitution::from_strs(&["01", "01"]).unwrap();
        let (sym, v) = essential(&z);
        let (est, se) = quadrature_log_norm(&sym, &v.restriction, 1, 200, 1).unwrap();
        assert!((est - 2f64.ln()).abs() < 1e-12);
        assert!(se < 1e-12);
        assert!(quadrature_log_norm(&sym, &v.restriction, 1, 10, 1).is_err());
        assert!(mahler_midpoint(4096).abs() <= 1e-3);
    }

    #[test]
    fn parseval_check() {
        let (sym, v) = essential(&zeta(5));
        let g = gram_constant_term(&sym).to_f64().unwrap();
        let vals: Vec<f64> = (0..10_000u64)
            .map(|i| {
                let s = uniform_torus(&mut stream(9, i), v.rank);
                sym.eval(&s).unwrap().frobenius_sq()
            })
            .collect();
        let (mean, se) = mean_and_std_error(&vals);
        assert!((mean - g).abs() <= 5.0 * se, "{mean} vs {g} (se {se})");
    }

    #[test]
    fn zeta20_quadrature_below_bound() {
        let (sym, v) = essential(&zeta(20));
        let (est, se) = quadrature_log_norm(&sym, &v.restriction, 1, 2000, 3).unwrap();
        assert!(est <= 0.5 * 40f64.ln() + 3.0 * se);
    }

    #[test]
    fn big_logs() {
        let x = BigInt::one() << 3000u32;
        assert!((ln_bigint(&x) - 3000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(ln_bigint(&BigInt::zero()), f64::NEG_INFINITY);
    }
}
