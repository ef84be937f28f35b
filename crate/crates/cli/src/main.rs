mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::CliError;

#[derive(Debug, Parser)]
#[command(name = "borwein", version, about = "Exact coefficients, sign checks and analytic bounds for Borwein-type polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the coefficients of one product as CSV rows `m,coeff`.
    Coeffs(CoeffsArgs),
    /// Check a sign pattern across a range of `n` and emit a JSON report.
    VerifySign(VerifySignArgs),
    /// Run the exact and analytic pipeline for one of the three sign theorems.
    VerifyTheorem(VerifyTheoremArgs),
    /// Solve the saddle-point equation and print the saddle data as JSON.
    SolveRadius(CoefficientArgs),
    /// Evaluate the peak and tail error budget for one coefficient.
    Bounds(CoefficientArgs),
    /// Tabulate `n,rstar,mstar` as CSV.
    Mstar(MstarArgs),
    /// Compare the contour integral with the exact coefficient.
    ContourCheck(ContourCheckArgs),
    /// Certified constants and the property suite.
    Certify(CertifyArgs),
    /// Predict sign changes of residue classes for a general product.
    Predict(PredictArgs),
    /// Sample `log|P_n^δ(r e^{iθ})|` over `θ ∈ [−π, π)` as CSV.
    PlotCircle(PlotCircleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `(q;q)_{3n}^δ / (q³;q³)_n^δ`.
    Borwein,
    /// `(q;q)_{4n}^δ / (q⁴;q⁴)_n^δ`.
    Mod4,
    /// `(q;q)_{5n}^δ / (q⁵;q⁵)_n^δ`.
    Mod5,
    /// `(q;q)_{7n}^δ / (q⁷;q⁷)_n^δ`.
    Mod7,
    /// `(q;q)_{Kn}^δ / (q^K;q^K)_n^δ` with `--K`.
    Cyclotomic,
    /// `(q;q)_∞^δ / (q³;q³)_∞^δ` up to `--trunc`.
    Infinite,
    /// `Σ q^{3(m²+mn+n²)} − Σ q^{3(m²+mn+n²+m+n)+1}` over `(m, n) ∈ ℤ²`, up to `--trunc`.
    Bbg,
    /// The three-term product expression for `P_∞`.
    Andrews,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, value_enum, default_value = "borwein")]
    pub family: Family,
    #[arg(long, default_value_t = 1)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub delta: u32,
    /// Modulus for `--family cyclotomic`.
    #[arg(long = "K")]
    pub k: Option<u64>,
    /// Highest exponent written; required for infinite families.
    #[arg(long)]
    pub trunc: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifySignArgs {
    #[arg(long, value_enum, default_value = "borwein")]
    pub family: Family,
    #[arg(long, default_value_t = 1)]
    pub delta: u32,
    /// Inclusive range `a..b` or a single value.
    #[arg(long)]
    pub n: String,
    #[arg(long)]
    pub m_limit: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyTheoremArgs {
    /// 1, 2 or 3 for `P_n`, `P_n²` or `P_n³`.
    #[arg(long)]
    pub theorem: u32,
    #[arg(long)]
    pub n: String,
    /// Truncation for the exact part; coverage is incomplete when it is below `max(m*, 3n)`.
    #[arg(long)]
    pub m_limit: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoefficientArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub m: u64,
    #[arg(long, default_value_t = 1)]
    pub delta: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MstarArgs {
    #[arg(long, default_value_t = 2)]
    pub delta: u32,
    #[arg(long)]
    pub n: String,
    #[arg(long, default_value_t = 1)]
    pub stride: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ContourCheckArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub m: u64,
    #[arg(long, default_value_t = 1)]
    pub delta: u32,
    /// Number of trapezoidal nodes; defaults to `12δn² + 16`.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(subcommand)]
    pub command: CertifyCommand,
}

#[derive(Debug, Subcommand)]
pub enum CertifyCommand {
    /// Certified upper bound for one `β_i(μ)`.
    Beta {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        mu: f64,
        /// Use the fine grid of 10⁶ cells.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every property check and emit a JSON manifest.
    AppendixSuite {
        #[arg(long, default_value_t = 0x5EED_2024)]
        seed: u64,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct PredictArgs {
    #[command(subcommand)]
    pub scan: Option<PredictCommand>,
    #[arg(long = "K")]
    pub k: Option<u64>,
    /// Comma-separated offsets `α`; the set is closed under `α ↦ K − α`.
    #[arg(long, value_delimiter = ',')]
    pub offsets: Option<Vec<u64>>,
    #[arg(long, default_value_t = 1)]
    pub delta: i32,
    /// Residue class; all classes when omitted.
    #[arg(long)]
    pub residue: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum PredictCommand {
    /// Tabulate the prediction for every residue class as CSV.
    Scan {
        #[arg(long = "K")]
        k: u64,
        #[arg(long, value_delimiter = ',')]
        offsets: Option<Vec<u64>>,
        #[arg(long, default_value_t = 1)]
        delta: i32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct PlotCircleArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 1)]
    pub delta: u32,
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("BORWEIN_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("BORWEIN_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Resource(format!("cannot start {threads} worker threads: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| commands::run(cli.command));
    match result {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
