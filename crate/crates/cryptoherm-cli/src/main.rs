//! Command-line front end: energy spectra, pseudometric dumps, positivity
//! analysis, metric-aware time evolution, and a verification ledger that
//! re-derives every published reference value.
//!
//! Contract: stdout carries data only (CSV per RFC 4180, JSON with stable
//! key order), stderr carries diagnostics; identical invocations produce
//! byte-identical output. Exit codes: 2 for configuration errors, 3 for
//! numerical or I/O failures, 4 for verification failures.

mod analyze_cmd;
mod metric_cmd;
mod spectrum_cmd;
mod verify_paper;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cryptoherm::{Error, Result};

#[derive(Parser)]
#[command(
    name = "cryptoherm",
    version,
    about = "Exactly solvable non-Hermitian lattice model: real spectra, banded \
             metric operators, positivity domains, and metric-aware evolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Real energy spectrum of the N-site lattice at coupling a
    Spectrum(SpectrumArgs),
    /// Pseudometric tables P_0..P_k, optionally assembled into a metric
    Metric(MetricArgs),
    /// Positivity verdict, coefficient-domain boundary, spectral weights,
    /// and optional time evolution
    Analyze(AnalyzeArgs),
    /// Re-derive every published table and reference value and print a
    /// deterministic pass/fail ledger
    #[command(name = "verify-paper")]
    VerifyPaper(VerifyPaperArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Backend {
    /// Exact fractions end to end; inputs must be integers or p/q
    Rational,
    /// Double precision
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Source {
    /// Evaluate the closed-form tables
    Closed,
    /// Solve the intertwining equation band by band
    Oracle,
}

#[derive(Args)]
pub(crate) struct SpectrumArgs {
    /// Lattice dimension N ≥ 1
    #[arg(long = "N", value_name = "N")]
    pub n: usize,
    /// Coupling a — decimal ("2.5") or exact fraction ("5/2")
    #[arg(long)]
    pub a: String,
    /// csv prints the table layout (one row per lattice), json a record
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write output to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct MetricArgs {
    /// Lattice dimension N ≥ 1
    #[arg(long = "N", value_name = "N")]
    pub n: usize,
    /// Coupling a; the rational backend requires an exact fraction
    #[arg(long)]
    pub a: String,
    /// Band half-width k: the dump holds P_0..P_k
    #[arg(long)]
    pub k: usize,
    /// Superposition coefficient for k = 1 (shorthand for --alphas)
    #[arg(long, conflicts_with = "alphas")]
    pub alpha: Option<String>,
    /// Comma-separated coefficients α_1,…,α_k; assembles Θ into the dump
    #[arg(long)]
    pub alphas: Option<String>,
    /// Arithmetic backend (exact rational is the default for dumps)
    #[arg(long, value_enum, default_value_t = Backend::Rational)]
    pub backend: Backend,
    /// Closed-form tables or the independent band solver
    #[arg(long, value_enum, default_value_t = Source::Closed)]
    pub source: Source,
    /// Re-check the intertwining residual and cross-check both sources
    #[arg(long)]
    pub verify: bool,
    /// Output format (this dump is JSON-only)
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct AnalyzeArgs {
    /// Lattice dimension N ≥ 1
    #[arg(long = "N", value_name = "N")]
    pub n: usize,
    /// Coupling a — decimal or exact fraction
    #[arg(long)]
    pub a: String,
    /// Band half-width k of the metric family
    #[arg(long)]
    pub k: usize,
    /// Coefficient for k = 1 (shorthand for --alphas)
    #[arg(long, conflicts_with = "alphas")]
    pub alpha: Option<String>,
    /// Comma-separated coefficients α_1,…,α_k (default: all zero)
    #[arg(long)]
    pub alphas: Option<String>,
    /// Direction in coefficient space; searches the positivity boundary
    /// along it and reports alpha_max
    #[arg(long)]
    pub ray: Option<String>,
    /// Evolve an initial state and emit the trajectory as CSV
    #[arg(long)]
    pub evolve: bool,
    /// Initial state: e<s> for the site-s basis state, or comma-separated
    /// amplitudes
    #[arg(long, default_value = "e1")]
    pub init: String,
    /// Evolution horizon; the grid is t_i = i·tmax/steps
    #[arg(long, default_value_t = 10.0)]
    pub tmax: f64,
    /// Number of evolution steps (the grid has steps + 1 points)
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Site coordinates q_1 < … < q_N (default 1,2,…,N)
    #[arg(long)]
    pub sites: Option<String>,
    /// Report defaults to json; evolution output is csv
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct VerifyPaperArgs {}

/// Exit codes: 2 = configuration, 3 = numerical or I/O, 4 = verification.
fn error_exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) | Error::Parse(_) => 2,
        Error::Numerical(_) | Error::Io(_) => 3,
        Error::SolutionSpaceDimension { .. } | Error::ConjectureViolation(_) => 4,
    }
}

/// Print to stdout or write to the requested file.
pub(crate) fn write_output(out: &Option<PathBuf>, data: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, data).map_err(Error::from),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

/// Parse a comma-separated list with a shared element parser.
pub(crate) fn parse_list<T>(
    text: &str,
    parse: impl Fn(&str) -> Result<T>,
) -> Result<Vec<T>> {
    text.split(',').map(|piece| parse(piece.trim())).collect()
}

/// Resolve the --alpha/--alphas pair into exactly k coefficients.
pub(crate) fn resolve_alphas<T: Clone>(
    k: usize,
    alpha: &Option<String>,
    alphas: &Option<String>,
    parse: impl Fn(&str) -> Result<T>,
) -> Result<Option<Vec<T>>> {
    let list = match (alpha, alphas) {
        (Some(single), None) => {
            if k != 1 {
                return Err(Error::InvalidParameter(
                    "--alpha is the k = 1 shorthand; pass --alphas for wider families".into(),
                ));
            }
            Some(vec![parse(single)?])
        }
        (None, Some(many)) => Some(parse_list(many, parse)?),
        (None, None) => None,
        (Some(_), Some(_)) => unreachable!("clap rejects --alpha with --alphas"),
    };
    if let Some(values) = &list {
        if values.len() != k {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients supplied for band half-width {k}",
                values.len()
            )));
        }
    }
    Ok(list)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(args) => spectrum_cmd::run(&args),
        Command::Metric(args) => metric_cmd::run(&args),
        Command::Analyze(args) => analyze_cmd::run(&args),
        Command::VerifyPaper(args) => verify_paper::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(error_exit_code(&err))
        }
    }
}
