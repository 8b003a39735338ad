//! Singularity certificates for substitution Z- and R-actions.
//!
//! The spectrum is purely singular once the essential exponent satisfies
//! `chi < (1/2) log theta_1`, provided the restriction of `S^t` to the
//! relevant rational subspace is nonsingular, non-degenerate and free of
//! root-of-unity eigenvalues. Exact decisions compare an integer constant
//! term `C` from a bound for `zeta^k` with a rational lower bound `t` for
//! the Perron eigenvalue: `C < t^k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{
    best_cleared_bound, majorant_bound, power_symbol, BoundCertificate, BoundMethod, ClearingFactor, Majorant,
};
use crate::error::{Error, Result};
use crate::linalg::{
    cyclic_subspace, nullspace, perron_lower_bound, project_remark_b, rat, IntMatrix, MinimalSubspace, RatVector,
};
use crate::lyapunov::mc_exponent;
use crate::poly::{has_unit_root, is_degenerate, minimal_poly_of_root, nondegenerate_power, roots_numeric, IntPoly};
use crate::substitution::{Aperiodicity, Substitution};

/// Collatz–Wielandt refinements allowed when resolving `C < t^k`.
pub const PERRON_ROUNDS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Action {
    Z,
    #[serde(rename = "R_selfsimilar")]
    RSelfSimilar,
    #[serde(rename = "R_vector")]
    RVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    SingularCertified,
    SingularNumerical,
    Inconclusive,
    ConditionsFail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularityCertificate {
    pub action: Action,
    pub conditions: Vec<ConditionCheck>,
    pub chi_bound: Option<BoundCertificate>,
    /// Every bound computed along the way, including non-rigorous ones.
    pub bounds: Vec<BoundCertificate>,
    #[serde(with = "crate::report::rational_string")]
    pub theta1_lower: BigRational,
    pub theta1_rounds: usize,
    pub decision: Decision,
    /// Power of the substitution the analysis ran on.
    pub power_used: u64,
    pub remark_b_applied: bool,
    pub subspace: MinimalSubspace,
    pub notes: Vec<String>,
}

impl SingularityCertificate {
    /// Re-checks the exact inequality behind a certified decision.
    pub fn recheck(&self) -> bool {
        match (&self.decision, &self.chi_bound) {
            (Decision::SingularCertified, Some(b)) => match &b.constant_term {
                Some(c) if b.method.is_rigorous() => rat(c) < pow_rational(&self.theta1_lower, b.power),
                _ => false,
            },
            (Decision::SingularCertified, None) => false,
            _ => true,
        }
    }

    pub fn first_failed(&self) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| !c.passed)
    }
}

fn pow_rational(x: &BigRational, k: u32) -> BigRational {
    num_traits::pow(x.clone(), k as usize)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    /// Largest power `k` of the substitution used for Jensen bounds.
    pub k_max: u32,
    /// Monte Carlo samples for a numerical fallback; 0 disables it.
    pub samples: usize,
    /// Steps per Monte Carlo sample.
    pub iters: usize,
    pub seed: u64,
    /// Target width of numerical root enclosures.
    pub root_precision: f64,
    /// Optional user-supplied majorant (in the essential coordinates) with
    /// its clearing factors, checked on a grid.
    pub majorant: Option<(Majorant, Vec<ClearingFactor>)>,
    pub grid: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            k_max: 1,
            samples: 0,
            iters: 1000,
            seed: 0,
            root_precision: 1e-12,
            majorant: None,
            grid: 512,
        }
    }
}

/// Ledger of checks, filled in pipeline order.
#[derive(Default)]
struct Ledger {
    checks: Vec<ConditionCheck>,
    notes: Vec<String>,
}

impl Ledger {
    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(ConditionCheck { name: name.into(), passed, detail: detail.into() });
        passed
    }
}

/// The kernel of `p_theta1(S^t)`, where `p_theta1` is the minimal polynomial
/// of the Perron eigenvalue.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PFKernel {
    pub p_theta1: IntPoly,
    pub subspace: MinimalSubspace,
    /// Componentwise enclosures of the Perron vector of `S^t`, normalized to
    /// sum 1.
    pub pf_vector_box: Vec<(f64, f64)>,
}

pub fn perron_minimal_polynomial(s: &IntMatrix, precision: f64) -> Result<IntPoly> {
    let q = s.char_poly().squarefree_part();
    let boxes = roots_numeric(&q, precision)?;
    let perron = boxes
        .iter()
        .find(|b| b.perron)
        .ok_or_else(|| Error::Internal("no isolated Perron root".into()))?;
    minimal_poly_of_root(&q, perron)
}

/// Normalized Perron vector of a primitive matrix by exact power iteration;
/// the box spans the last two iterates widened by their difference.
fn perron_vector_box(a: &IntMatrix, rounds: usize) -> Vec<(f64, f64)> {
    let d = a.dim();
    let mut u: Vec<BigInt> = vec![BigInt::from(1); d];
    let normalize = |u: &[BigInt]| -> Vec<f64> {
        let total: BigInt = u.iter().sum();
        u.iter().map(|x| BigRational::new(x.clone(), total.clone()).to_f64().unwrap_or(f64::NAN)).collect()
    };
    let mut prev = normalize(&u);
    for _ in 0..rounds {
        u = crate::linalg::primitive_part(&a.mul_vec(&u));
        let cur = normalize(&u);
        let done = cur.iter().zip(&prev).all(|(x, y)| (x - y).abs() < 1e-15);
        prev = cur;
        if done {
            break;
        }
    }
    let next = normalize(&a.mul_vec(&u));
    prev.iter()
        .zip(&next)
        .map(|(x, y)| {
            let w = (x - y).abs();
            (x.min(*y) - w, x.max(*y) + w)
        })
        .collect()
}

pub fn pf_kernel_subspace(s: &IntMatrix) -> Result<PFKernel> {
    pf_kernel_with_precision(s, 1e-12)
}

fn pf_kernel_with_precision(s: &IntMatrix, precision: f64) -> Result<PFKernel> {
    if !crate::linalg::is_primitive(s)? {
        return Err(Error::NotPrimitive);
    }
    let a = s.transpose();
    let p = perron_minimal_polynomial(s, precision)?;
    let pa = a.eval_poly(&p);
    let rows: Vec<Vec<BigRational>> = pa.rows().iter().map(|r| r.iter().map(rat).collect()).collect();
    let kernel: Vec<RatVector> = nullspace(&rows, a.dim()).into_iter().map(RatVector).collect();
    if kernel.len() != p.deg() {
        return Err(Error::Internal(format!(
            "kernel of the Perron factor has dimension {} but degree {}",
            kernel.len(),
            p.deg()
        )));
    }
    let subspace = MinimalSubspace::from_generators(&a, &kernel)?;
    let pf_vector_box = perron_vector_box(&a, 2000);
    Ok(PFKernel { p_theta1: p, subspace, pf_vector_box })
}

/// Checks the restriction of `v` and returns false on the first failure.
fn restriction_conditions(ledger: &mut Ledger, v: &MinimalSubspace) -> Result<bool> {
    let b = &v.restriction;
    if !ledger.check("nonsingular_restriction", !b.det().is_zero(), format!("det B = {}", b.det())) {
        return Ok(false);
    }
    if let Some(k) = is_degenerate(b)? {
        ledger.check("non_degenerate_restriction", false, format!("eigenvalue ratio of order {k}"));
        return Ok(false);
    }
    ledger.check("non_degenerate_restriction", true, "no eigenvalue ratio is a root of unity");
    match has_unit_root(&b.char_poly())? {
        Some(k) => {
            ledger.check("no_unit_root_eigenvalue", false, format!("eigenvalue of order {k}"));
            Ok(false)
        }
        None => Ok(ledger.check("no_unit_root_eigenvalue", true, "no root-of-unity eigenvalue")),
    }
}

/// Best exact bound over `k = 1..=k_max`, stopping at the word-length cap.
fn best_exact_bound(zeta: &Substitution, v: &MinimalSubspace, opts: &AnalysisOptions, ledger: &mut Ledger) -> Result<Vec<BoundCertificate>> {
    let mut out = Vec::new();
    for k in 1..=opts.k_max.max(1) {
        let sym = match power_symbol(zeta, v, k) {
            Ok(s) => s,
            Err(e @ Error::WordLengthCap { .. }) => {
                ledger.notes.push(format!("stopped at k = {k}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        };
        out.push(best_cleared_bound(&sym, k)?);
    }
    Ok(out)
}

/// Shared tail of both pipelines: bounds, Perron comparison, decision.
fn decide(
    action: Action,
    zeta: &Substitution,
    v: MinimalSubspace,
    power: u64,
    remark_b: bool,
    opts: &AnalysisOptions,
    mut ledger: Ledger,
) -> Result<SingularityCertificate> {
    let s = zeta.substitution_matrix();
    let mut bounds = best_exact_bound(zeta, &v, opts, &mut ledger)?;
    let best = bounds
        .iter()
        .filter(|b| b.method.is_rigorous())
        .min_by(|a, b| a.bound.total_cmp(&b.bound))
        .cloned();
    let (theta1_lower, theta1_rounds) = match &best {
        Some(b) => {
            let c = rat(b.constant_term.as_ref().expect("exact bounds carry a constant"));
            perron_lower_bound(&s, PERRON_ROUNDS, |t| pow_rational(t, b.power) > c)?
        }
        None => perron_lower_bound(&s, PERRON_ROUNDS, |_| false)?,
    };
    let certified = best
        .as_ref()
        .map_or(false, |b| rat(b.constant_term.as_ref().unwrap()) < pow_rational(&theta1_lower, b.power));
    let half_log_theta = 0.5 * theta1_lower.to_f64().unwrap_or(f64::NAN).ln();

    if let Some((maj, clearings)) = &opts.majorant {
        let sym = power_symbol(zeta, &v, 1)?;
        match majorant_bound(&sym, maj, clearings, 1, opts.grid) {
            Ok(b) => bounds.push(b),
            Err(e) => ledger.notes.push(format!("majorant rejected: {e}")),
        }
    }

    let aperiodic = zeta.aperiodicity_gate();
    let mut chi_bound = best.clone();
    let decision = if certified {
        if aperiodic == Aperiodicity::Unknown {
            ledger.notes.push("aperiodicity not established (rational Perron eigenvalue); decision downgraded".into());
            Decision::Inconclusive
        } else {
            Decision::SingularCertified
        }
    } else if opts.samples > 0 {
        let est = mc_exponent(zeta, &v, opts.iters.max(10), opts.samples.max(2), opts.seed)?;
        let mc = BoundCertificate {
            bound: est.value,
            constant_term: None,
            clearings: Vec::new(),
            method: BoundMethod::MonteCarlo,
            power: 1,
            std_error: Some(est.std_error),
            samples: Some(est.n_samples),
            seed: Some(est.seed),
        };
        bounds.push(mc.clone());
        ledger.notes.push("Monte Carlo evidence is not a proof".into());
        if est.value + 3.0 * est.std_error < half_log_theta && aperiodic == Aperiodicity::Aperiodic {
            chi_bound = Some(mc);
            Decision::SingularNumerical
        } else {
            Decision::Inconclusive
        }
    } else {
        Decision::Inconclusive
    };
    Ok(SingularityCertificate {
        action,
        conditions: ledger.checks,
        chi_bound,
        bounds,
        theta1_lower,
        theta1_rounds,
        decision,
        power_used: power,
        remark_b_applied: remark_b,
        subspace: v,
        notes: ledger.notes,
    })
}

fn conditions_fail(
    action: Action,
    zeta: &Substitution,
    v: MinimalSubspace,
    power: u64,
    remark_b: bool,
    ledger: Ledger,
) -> Result<SingularityCertificate> {
    let (theta1_lower, theta1_rounds) = perron_lower_bound(&zeta.substitution_matrix(), 0, |_| true)?;
    Ok(SingularityCertificate {
        action,
        conditions: ledger.checks,
        chi_bound: None,
        bounds: Vec::new(),
        theta1_lower,
        theta1_rounds,
        decision: Decision::ConditionsFail,
        power_used: power,
        remark_b_applied: remark_b,
        subspace: v,
        notes: ledger.notes,
    })
}

fn primitive_check(zeta: &Substitution, ledger: &mut Ledger) -> Result<()> {
    if !zeta.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    ledger.check("primitive", true, "some power of S is positive");
    let gate = zeta.aperiodicity_gate();
    ledger.check(
        "aperiodic",
        gate == Aperiodicity::Aperiodic,
        match gate {
            Aperiodicity::Aperiodic => "Perron eigenvalue is irrational",
            Aperiodicity::Unknown => "irrationality criterion does not apply",
        },
    );
    Ok(())
}

/// Minimal subspace of `v` under `A`, with the nilpotent part split off
/// when the restriction is singular.
fn subspace_of(a: &IntMatrix, v: &RatVector, ledger: &mut Ledger) -> Result<(MinimalSubspace, bool)> {
    let space = cyclic_subspace(a, v)?;
    if !space.restriction.det().is_zero() {
        return Ok((space, false));
    }
    let (v1, m) = project_remark_b(a, v)?;
    if v1.is_zero() {
        ledger.notes.push("the vector lies in the nilpotent part".into());
        return Ok((space, false));
    }
    ledger.notes.push(format!("singular restriction: replaced the vector by its projection (A^n v = A^n v1 for n >= {m})"));
    Ok((cyclic_subspace(a, &v1)?, true))
}

/// Minimal subspace used for the Z-action: the cyclic subspace of `1`, or of
/// its projection when the restriction is singular. The flag reports the
/// projection.
pub fn z_action_subspace(zeta: &Substitution) -> Result<(MinimalSubspace, bool)> {
    let a = zeta.substitution_matrix().transpose();
    subspace_of(&a, &RatVector::ones(zeta.alphabet_size()), &mut Ledger::default())
}

/// Certificate for the Z-action (vector `1`).
pub fn analyze_z_action(zeta: &Substitution, opts: &AnalysisOptions) -> Result<SingularityCertificate> {
    let mut ledger = Ledger::default();
    primitive_check(zeta, &mut ledger)?;
    let d = zeta.alphabet_size();
    let ones = RatVector::ones(d);
    let a = zeta.substitution_matrix().transpose();
    let (mut v, remark_b) = subspace_of(&a, &ones, &mut ledger)?;
    let mut zeta_used = zeta.clone();
    let mut power = 1;
    if !v.restriction.det().is_zero() {
        let k0 = nondegenerate_power(&v.restriction);
        if k0 > 1 {
            ledger.notes.push(format!("degenerate restriction: passing to zeta^{k0}"));
            zeta_used = zeta.power(k0 as u32)?;
            power = k0;
            let ak = zeta_used.substitution_matrix().transpose();
            let start = if remark_b { project_remark_b(&a, &ones)?.0 } else { ones.clone() };
            v = cyclic_subspace(&ak, &start)?;
        }
    }
    if !restriction_conditions(&mut ledger, &v)? {
        return conditions_fail(Action::Z, &zeta_used, v, power, remark_b, ledger);
    }
    decide(Action::Z, &zeta_used, v, power, remark_b, opts, ledger)
}

/// Vector of an R-action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RVectorSpec {
    /// The Perron vector (self-similar action).
    Pf,
    /// An explicit positive rational vector.
    Rational { v: RatVector },
}

/// Certificate for the R-action of a vector in `ker p_theta1(S^t)`.
pub fn analyze_r_action(zeta: &Substitution, spec: &RVectorSpec, opts: &AnalysisOptions) -> Result<SingularityCertificate> {
    let mut ledger = Ledger::default();
    primitive_check(zeta, &mut ledger)?;
    let action = match spec {
        RVectorSpec::Pf => Action::RSelfSimilar,
        RVectorSpec::Rational { .. } => Action::RVector,
    };
    let mut kernel = pf_kernel_with_precision(&zeta.substitution_matrix(), opts.root_precision)?;
    if kernel.subspace.is_full() {
        ledger.notes.push("characteristic polynomial is irreducible: any positive vector qualifies".into());
    }
    match spec {
        RVectorSpec::Pf => {
            let positive = kernel.pf_vector_box.iter().all(|(lo, _)| *lo > 0.0);
            if !ledger.check("positive_vector", positive, "Perron vector enclosure is positive") {
                return Err(Error::NotPositive);
            }
        }
        RVectorSpec::Rational { v } => {
            if v.dim() != zeta.alphabet_size() {
                return Err(Error::DimensionMismatch { expected: zeta.alphabet_size(), found: v.dim() });
            }
            if !v.is_positive() {
                return Err(Error::NotPositive);
            }
            if !kernel.subspace.contains(v) {
                return Err(Error::NotInSubspace);
            }
            ledger.check("positive_vector", true, "exact positivity and membership in the Perron kernel");
        }
    }
    let mut zeta_used = zeta.clone();
    let mut power = 1;
    let k0 = nondegenerate_power(&kernel.subspace.restriction);
    if k0 > 1 {
        ledger.notes.push(format!("degenerate restriction: passing to zeta^{k0}"));
        zeta_used = zeta.power(k0 as u32)?;
        power = k0;
        kernel = pf_kernel_with_precision(&zeta_used.substitution_matrix(), opts.root_precision)?;
    }
    let p = &kernel.p_theta1;
    let minimal_ok = kernel.subspace.restriction.char_poly() == *p;
    ledger.check("restriction_polynomial", minimal_ok, format!("restriction has characteristic polynomial {p:?}"));
    if !minimal_ok {
        return Err(Error::Internal("restriction polynomial differs from the Perron factor".into()));
    }
    let v = kernel.subspace;
    if !restriction_conditions(&mut ledger, &v)? {
        return conditions_fail(action, &zeta_used, v, power, false, ledger);
    }
    decide(action, &zeta_used, v, power, false, opts, ledger)
}
