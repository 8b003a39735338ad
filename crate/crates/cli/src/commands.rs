//! Command implementations; each builds a [`Report`] and emits it.

use std::time::Instant;

use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use specto::bounds::{
    best_cleared_bound, binary_words_majorant, cleared_jensen_bound, majorant_bound, monte_carlo_bound,
    power_symbol, BoundCertificate,
};
use specto::equidist::{
    integer_direction, interval_frequency, orbit_mod1, ud_conditions, weyl_sums, OrbitOptions,
};
use specto::lyapunov::{mc_exponent, pointwise_upper_exponent, PointwiseOptions};
use specto::report::Report;
use specto::rng::{stream, uniform_fraction};
use specto::substitution::{make_family, FamilyParams};
use specto::torus::{required_bits, FixedPointTorusPoint};
use specto::verdict::{
    analyze_r_action, analyze_z_action, z_action_subspace, AnalysisOptions, Decision, RVectorSpec,
};

use crate::input::{parse_vector_csv, MatrixVectorInput, SubstitutionInput};
use crate::{emit, text, Failure, Format, OutputArgs};

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| Failure::Internal(e.to_string()))
}

fn finish(report: &Report, out: &OutputArgs, started: Instant) -> Result<(), Failure> {
    let mut report = report.clone();
    report.timing_ms.insert("total".into(), started.elapsed().as_millis() as u64);
    let body = match out.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).map_err(|e| Failure::Internal(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Text => text::render(&report),
    };
    emit(&body, out.output.as_ref())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ActionArg {
    Z,
    RSelfsimilar,
    RVector,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    input: SubstitutionInput,
    #[arg(long, value_enum, default_value = "z")]
    action: ActionArg,
    /// Rational vector for `--action r-vector`, e.g. `1,1,1/2`.
    #[arg(long)]
    vector: Option<String>,
    /// Largest power of the substitution used for exact bounds.
    #[arg(long, default_value_t = 1)]
    k_max: u32,
    /// Monte Carlo samples for a numerical fallback (0 disables it).
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Cocycle steps per Monte Carlo sample.
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bits of accuracy for numerical root enclosures.
    #[arg(long, default_value_t = 40)]
    precision_bits: u32,
    /// Grid size per variable for majorant checks.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    #[command(flatten)]
    out: OutputArgs,
}

fn family_majorant(family: &Option<FamilyParams>) -> Option<(specto::bounds::Majorant, Vec<specto::bounds::ClearingFactor>)> {
    match family {
        Some(p @ FamilyParams::ZetaMAB { m, .. }) => Some(binary_words_majorant(*m, p.minority_count().unwrap_or(0))),
        _ => None,
    }
}

pub fn analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let (input, zeta, family) = args.input.load()?;
    if !(1..=52).contains(&args.precision_bits) {
        return Err(Failure::Input("--precision-bits must lie in 1..=52".into()));
    }
    let opts = AnalysisOptions {
        k_max: args.k_max,
        samples: args.samples,
        iters: args.iters,
        seed: args.seed,
        root_precision: 2f64.powi(-(args.precision_bits as i32)),
        majorant: family_majorant(&family),
        grid: args.grid,
    };
    let cert = match args.action {
        ActionArg::Z => analyze_z_action(&zeta, &opts)?,
        ActionArg::RSelfsimilar => analyze_r_action(&zeta, &RVectorSpec::Pf, &opts)?,
        ActionArg::RVector => {
            let v = args.vector.as_deref().ok_or_else(|| Failure::Input("--action r-vector needs --vector".into()))?;
            analyze_r_action(&zeta, &RVectorSpec::Rational { v: parse_vector_csv(v)? }, &opts)?
        }
    };
    if !cert.recheck() {
        return Err(Failure::Internal("certificate failed its exact recheck".into()));
    }
    let mut report = Report::new("analyze", input);
    if args.samples > 0 {
        report.seeds.insert("monte-carlo".into(), args.seed);
    }
    report.results = json!({ "certificate": to_value(&cert)? });
    finish(&report, &args.out, started)
}

#[derive(Args, Debug)]
pub struct UdCheckArgs {
    #[command(flatten)]
    input: MatrixVectorInput,
    /// Add Weyl-sum statistics along sampled orbits.
    #[arg(long)]
    empirical: bool,
    #[arg(long, default_value_t = 100_000)]
    n_steps: usize,
    /// Frequency bound H for Weyl sums.
    #[arg(long, default_value_t = 3)]
    h_max: i64,
    /// Number of random omega samples.
    #[arg(long, default_value_t = 10)]
    omegas: u64,
    /// Bits of each random omega.
    #[arg(long, default_value_t = 4096)]
    precision_bits: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

pub fn ud_check(args: UdCheckArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let (input, a, v) = args.input.load()?;
    let verdict = ud_conditions(&a, &v)?;
    let mut results = json!({ "verdict": to_value(&verdict)? });
    let mut report = Report::new("ud-check", input);
    if args.empirical {
        if args.precision_bits < 64 || args.n_steps == 0 || args.h_max < 1 {
            return Err(Failure::Input("need --precision-bits >= 64, --n-steps >= 1 and --h-max >= 1".into()));
        }
        let dir = integer_direction(&v);
        let witness_h: Option<(Vec<i64>, u64)> = verdict.witness.as_ref().and_then(|w| {
            let h: Option<Vec<i64>> = w.h.iter().map(|x| i64::try_from(x).ok()).collect();
            h.map(|h| (h, w.k))
        });
        let mut samples = Vec::new();
        for i in 0..args.omegas {
            let omega = uniform_fraction(&mut stream(args.seed, i), args.precision_bits);
            let x0 = FixedPointTorusPoint::scaled(args.precision_bits, &omega, &dir)?;
            let pts = orbit_mod1(&a, &x0, args.n_steps, OrbitOptions { exact_dyadic: true })?;
            let (w, h) = weyl_sums(&pts, args.h_max)?;
            let mut entry = json!({ "omega_index": i, "max_weyl_sum": w, "argmax_h": h });
            if let Some((h, k)) = &witness_h {
                entry["witness_hit_frequency"] = json!(interval_frequency(&pts, h, *k));
                entry["witness_hit_threshold"] = json!(1.0 / *k as f64);
            }
            samples.push(entry);
        }
        results["empirical"] = json!({
            "n_steps": args.n_steps,
            "h_max": args.h_max,
            "precision_bits": args.precision_bits,
            "direction": dir.iter().map(BigInt::to_string).collect::<Vec<_>>(),
            "note": "omega is a random dyadic rational; its orbit is computed exactly",
            "samples": samples,
        });
        report.seeds.insert("omega".into(), args.seed);
    }
    report.results = results;
    finish(&report, &args.out, started)
}

#[derive(Args, Debug)]
pub struct LyapunovArgs {
    #[command(flatten)]
    input: SubstitutionInput,
    #[arg(long, default_value_t = 1000)]
    n_steps: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also follow this many exact orbits of omega * 1 for the pointwise
    /// upper exponent.
    #[arg(long, default_value_t = 0)]
    pointwise: u64,
    /// Steps along each pointwise orbit.
    #[arg(long, default_value_t = 2000)]
    pointwise_steps: usize,
    /// Fixed-point precision of the pointwise orbits (default: the bit policy).
    #[arg(long)]
    precision_bits: Option<u32>,
    /// Treat omega as an exact dyadic rational and skip the bit policy.
    #[arg(long)]
    exact_dyadic: bool,
    #[command(flatten)]
    out: OutputArgs,
}

pub fn lyapunov(args: LyapunovArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let (input, zeta, _) = args.input.load()?;
    let (v, projected) = z_action_subspace(&zeta)?;
    let mut est = mc_exponent(&zeta, &v, args.n_steps, args.samples, args.seed)?;
    let sym = power_symbol(&zeta, &v, 1)?;
    est.certified_upper_bounds.push((&best_cleared_bound(&sym, 1)?).into());
    let mut results = json!({
        "estimate": to_value(&est)?,
        "consistent_with_bounds": est.consistent_with_bounds(),
        "subspace_rank": v.rank,
        "projected": projected,
    });
    let mut report = Report::new("lyapunov", input);
    report.seeds.insert("monte-carlo".into(), args.seed);
    if args.pointwise > 0 {
        let e = zeta.substitution_matrix().transpose();
        let bits = match args.precision_bits {
            Some(b) => b,
            None => u32::try_from(required_bits(&e, args.pointwise_steps as u64))
                .map_err(|_| Failure::Input("too many steps for the precision policy".into()))?,
        };
        let ones = vec![BigInt::from(1); zeta.alphabet_size()];
        let opts = PointwiseOptions { exact_dyadic: args.exact_dyadic, ..Default::default() };
        let mut values = Vec::new();
        for i in 0..args.pointwise {
            let omega = uniform_fraction(&mut stream(args.seed ^ 0x9e37_79b9_7f4a_7c15, i), bits);
            let w = FixedPointTorusPoint::scaled(bits, &omega, &ones)?;
            values.push(to_value(&pointwise_upper_exponent(&zeta, &w, args.pointwise_steps, opts)?)?);
        }
        results["pointwise"] = Value::Array(values);
        report.seeds.insert("pointwise-omega".into(), args.seed ^ 0x9e37_79b9_7f4a_7c15);
    }
    report.results = results;
    finish(&report, &args.out, started)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundMethodArg {
    Jensen,
    Cleared,
    Majorant,
    MonteCarlo,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    input: SubstitutionInput,
    #[arg(long, value_enum, default_value = "cleared")]
    method: BoundMethodArg,
    /// Power of the substitution.
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 512)]
    grid: usize,
    #[command(flatten)]
    out: OutputArgs,
}

pub fn bound(args: BoundArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let (input, zeta, family) = args.input.load()?;
    if args.k == 0 {
        return Err(Failure::Input("--k must be at least 1".into()));
    }
    let (v, _) = z_action_subspace(&zeta)?;
    let sym = power_symbol(&zeta, &v, args.k)?;
    let mut report = Report::new("bound", input);
    let cert: BoundCertificate = match args.method {
        BoundMethodArg::Jensen => cleared_jensen_bound(&sym, &[], args.k)?,
        BoundMethodArg::Cleared => best_cleared_bound(&sym, args.k)?,
        BoundMethodArg::Majorant => {
            let (maj, clearings) = family_majorant(&family)
                .ok_or_else(|| Failure::Input("a majorant is only built in for the zeta_mAB family".into()))?;
            majorant_bound(&power_symbol(&zeta, &v, 1)?, &maj, &clearings, 1, args.grid)?
        }
        BoundMethodArg::MonteCarlo => {
            report.seeds.insert("monte-carlo".into(), args.seed);
            monte_carlo_bound(&sym, &v.restriction.pow(args.k), args.k, args.samples, args.seed)?
        }
    };
    report.results = json!({ "certificate": to_value(&cert)?, "subspace_rank": v.rank });
    finish(&report, &args.out, started)
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    #[command(flatten)]
    input: MatrixVectorInput,
    #[arg(long, default_value_t = 1000)]
    n_steps: usize,
    #[arg(long, default_value_t = 4096)]
    precision_bits: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enforce the bit policy for truncated real starting points.
    #[arg(long)]
    strict_precision: bool,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

pub fn orbit(args: OrbitArgs) -> Result<(), Failure> {
    let (_, a, v) = args.input.load()?;
    if args.precision_bits < 64 {
        return Err(Failure::Input("--precision-bits must be at least 64".into()));
    }
    let omega = uniform_fraction(&mut stream(args.seed, 0), args.precision_bits);
    let x0 = FixedPointTorusPoint::scaled(args.precision_bits, &omega, &integer_direction(&v))?;
    let pts = orbit_mod1(&a, &x0, args.n_steps, OrbitOptions { exact_dyadic: !args.strict_precision })?;
    let r = a.dim();
    let mut csv = String::from("n");
    for i in 0..r {
        csv.push_str(&format!(",x{i}"));
    }
    csv.push('\n');
    for (n, p) in pts.iter().enumerate() {
        csv.push_str(&n.to_string());
        for x in p.to_f64() {
            csv.push_str(&format!(",{x:.17}"));
        }
        csv.push('\n');
    }
    emit(&csv, args.output.as_ref())
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// Grid size per variable for the majorant check.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    #[command(flatten)]
    out: OutputArgs,
}

struct Check {
    name: String,
    expected: String,
    actual: String,
}

impl Check {
    fn new(name: &str, expected: impl ToString, actual: impl ToString) -> Self {
        Check { name: name.into(), expected: expected.to_string(), actual: actual.to_string() }
    }

    fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

fn constant(c: &Option<specto::bounds::BoundCertificate>) -> String {
    c.as_ref().and_then(|b| b.constant_term.as_ref()).map_or("none".into(), BigInt::to_string)
}

fn decision_name(d: Decision) -> String {
    serde_json::to_value(d).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

pub fn reproduce(args: ReproduceArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let mut checks = Vec::new();
    let mut sections = serde_json::Map::new();
    let base = AnalysisOptions { grid: args.grid, ..Default::default() };

    let z20 = make_family(&FamilyParams::ZetaM { m: 20 })?;
    let c1 = analyze_z_action(&z20, &base)?;
    checks.push(Check::new("zeta_m(20) cleared constant", 40, constant(&c1.chi_bound)));
    checks.push(Check::new("zeta_m(20) Z-action", "SINGULAR_CERTIFIED", decision_name(c1.decision)));
    sections.insert("zeta_m".into(), to_value(&c1)?);

    let s8 = make_family(&FamilyParams::SigmaM { m: 8 })?;
    let c2 = analyze_z_action(&s8, &base)?;
    let c2r = analyze_r_action(&s8, &RVectorSpec::Pf, &base)?;
    checks.push(Check::new("sigma_m(8) cleared constant", 16, constant(&c2.chi_bound)));
    checks.push(Check::new("sigma_m(8) Z-action", "SINGULAR_CERTIFIED", decision_name(c2.decision)));
    checks.push(Check::new("sigma_m(8) self-similar R-action", "SINGULAR_CERTIFIED", decision_name(c2r.decision)));
    sections.insert("sigma_m".into(), json!({ "z": to_value(&c2)?, "r_selfsimilar": to_value(&c2r)? }));

    let params = FamilyParams::ZetaMAB { m: 30, a: format!("{}1", "0".repeat(29)), b: "1".repeat(30) };
    let k = params.minority_count().unwrap_or(0);
    let z3 = make_family(&params)?;
    let opts3 = AnalysisOptions { majorant: Some(binary_words_majorant(30, k)), ..base.clone() };
    let c3 = analyze_z_action(&z3, &opts3)?;
    let grid = c3.bounds.iter().find(|b| b.method == specto::bounds::BoundMethod::MajorantGrid).cloned();
    checks.push(Check::new("zeta_mAB(30) majorant constant", 8 * k * k + 8 * k + 14, constant(&grid)));
    checks.push(Check::new("zeta_mAB(30) Z-action", "SINGULAR_CERTIFIED", decision_name(c3.decision)));
    sections.insert("zeta_mAB".into(), json!({ "params": to_value(&params)?, "k": k, "certificate": to_value(&c3)? }));

    let mut report = Report::new("reproduce", json!({ "grid": args.grid }));
    let listed: Vec<Value> = checks
        .iter()
        .map(|c| json!({ "name": c.name, "expected": c.expected, "actual": c.actual, "ok": c.ok() }))
        .collect();
    report.results = json!({ "checks": listed, "families": Value::Object(sections) });
    finish(&report, &args.out, started)?;
    let bad: Vec<String> = checks
        .iter()
        .filter(|c| !c.ok())
        .map(|c| format!("{}: expected {}, got {}", c.name, c.expected, c.actual))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(bad.join("; ")))
    }
}

