//! `specto`: spectral analysis of substitutions from the command line.

mod commands;
mod input;
mod text;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit status for malformed input.
const EXIT_INPUT: u8 = 2;
/// Exit status for internal invariant violations.
const EXIT_INTERNAL: u8 = 3;
/// Exit status when `reproduce` finds a mismatch.
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "specto", version, about = "Singular-spectrum certificates for substitutions")]
struct Cli {
    /// Worker threads (default: available cores); SPECTO_THREADS overrides.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide singularity of the Z-action or an R-action.
    Analyze(commands::AnalyzeArgs),
    /// Check almost-everywhere equidistribution of A^n omega v mod 1.
    UdCheck(commands::UdCheckArgs),
    /// Estimate Lyapunov exponents of the spectral cocycle.
    Lyapunov(commands::LyapunovArgs),
    /// Upper bounds for the essential Lyapunov exponent.
    Bound(commands::BoundArgs),
    /// Export an exact torus orbit as CSV.
    Orbit(commands::OrbitArgs),
    /// Recompute the reference constants and decisions of the built-in families.
    Reproduce(commands::ReproduceArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Output options shared by the report-producing commands.
#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
    Mismatch(String),
}

impl From<specto::error::Error> for Failure {
    fn from(e: specto::error::Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), Failure> {
    let env = match std::env::var("SPECTO_THREADS") {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| Failure::Input(format!("SPECTO_THREADS={v} is not a count")))?),
        Err(_) => None,
    };
    if let Some(n) = env.or(flag) {
        if n == 0 {
            return Err(Failure::Input("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    Ok(())
}

/// Writes `body` to the requested destination.
pub fn emit(body: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).map_err(|e| Failure::Internal(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::UdCheck(a) => commands::ud_check(a),
        Command::Lyapunov(a) => commands::lyapunov(a),
        Command::Bound(a) => commands::bound(a),
        Command::Orbit(a) => commands::orbit(a),
        Command::Reproduce(a) => commands::reproduce(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, kind, msg) = match f {
                Failure::Input(m) => (EXIT_INPUT, "input error", m),
                Failure::Internal(m) => (EXIT_INTERNAL, "internal error", m),
                Failure::Mismatch(m) => (EXIT_MISMATCH, "reproduction mismatch", m),
            };
            eprintln!("specto: {kind}: {msg}");
            ExitCode::from(code)
        }
    }
}
