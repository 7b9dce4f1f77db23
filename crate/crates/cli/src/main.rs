//! `padicsum`: exact scans of the p-adic valuations of the rational prefix
//! sums s_n = sum_{k<=n} (1/a^k + 1/(p-a)^k) p^k / k, with machine-readable
//! reports. Every flag can also be set through a PADICSUM_* environment
//! variable. Exit codes: 0 all claims verified, 1 a claim was violated,
//! 2 usage or configuration error.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

#[derive(Parser)]
#[command(
    name = "padicsum",
    version,
    about = "Exact p-adic valuation bounds for rational prefix sums"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Scan s_n and compare nu_p(s_n) against (n+1) - log_p((n+1)/2) exactly.
    Sum(SumArgs),
    /// Run one named identity or machinery check.
    Verify(VerifyArgs),
    /// Compare the observed bound-equality indices with {2p^alpha - 1}.
    ScanEquality(ScanEqualityArgs),
    /// Evaluate the truncated p-adic logarithm series at a rational argument.
    PadicLog(PadicLogArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

impl Format {
    pub fn label(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Human => "human",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Mansour,
    LcmBinom,
    Identity11,
    Taylor,
    Theorem2,
    Eqint,
    FunctionalEq,
    Eq14,
}

impl Check {
    pub fn label(self) -> &'static str {
        match self {
            Check::Mansour => "mansour",
            Check::LcmBinom => "lcm-binom",
            Check::Identity11 => "identity11",
            Check::Taylor => "taylor",
            Check::Theorem2 => "theorem2",
            Check::Eqint => "eqint",
            Check::FunctionalEq => "functional-eq",
            Check::Eq14 => "eq14",
        }
    }
}

#[derive(Args)]
pub struct OutputArgs {
    /// Report format on stdout; diagnostics go to stderr.
    #[arg(long, value_enum, default_value_t = Format::Human, env = "PADICSUM_FORMAT")]
    pub format: Format,
}

fn parse_bigint(s: &str) -> Result<BigInt, String> {
    s.trim().parse::<BigInt>().map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.trim().parse::<BigRational>().map_err(|e| e.to_string())
}

#[derive(Args)]
pub struct SumArgs {
    /// Prime p.
    #[arg(long, env = "PADICSUM_P")]
    pub p: u64,
    /// Integer a, not a multiple of p; may be negative or exceed p.
    #[arg(long, env = "PADICSUM_A", value_parser = parse_bigint, allow_hyphen_values = true)]
    pub a: BigInt,
    /// Scan n = 1..=n-max.
    #[arg(long, env = "PADICSUM_N_MAX", value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: u64,
    /// Threads for per-n verdicts (default: all cores). The prefix-sum
    /// producer itself is sequential.
    #[arg(long, env = "PADICSUM_JOBS")]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Which check to run.
    #[arg(value_enum)]
    pub check: Check,
    /// Prime p (checks that need one default to 3).
    #[arg(long, env = "PADICSUM_P")]
    pub p: Option<u64>,
    /// Integer a (checks that need one default to 1).
    #[arg(long, env = "PADICSUM_A", value_parser = parse_bigint, allow_hyphen_values = true)]
    pub a: Option<BigInt>,
    /// Upper end of the scanned range; each check has its own default.
    #[arg(long, env = "PADICSUM_N_MAX", value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: Option<u64>,
    /// Sample count for the randomized checks.
    #[arg(long, env = "PADICSUM_SAMPLES")]
    pub samples: Option<u64>,
    /// RNG seed for the randomized checks; always echoed in the report.
    #[arg(long, env = "PADICSUM_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Residue precision N; truncated work happens mod p^N.
    #[arg(long, env = "PADICSUM_PRECISION", value_parser = clap::value_parser!(u32).range(1..=64))]
    pub precision: Option<u32>,
    /// Window width for the vanishing certificate.
    #[arg(long, env = "PADICSUM_WINDOW")]
    pub window: Option<u64>,
    /// Threads for per-n verdicts (default: all cores).
    #[arg(long, env = "PADICSUM_JOBS")]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct ScanEqualityArgs {
    /// Prime p.
    #[arg(long, env = "PADICSUM_P")]
    pub p: u64,
    /// Integer a; the equality set does not depend on it (default 1).
    #[arg(long, env = "PADICSUM_A", value_parser = parse_bigint, allow_hyphen_values = true)]
    pub a: Option<BigInt>,
    /// Scan n = 1..=n-max.
    #[arg(long, env = "PADICSUM_N_MAX", value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct PadicLogArgs {
    /// Prime p.
    #[arg(long, env = "PADICSUM_P")]
    pub p: u64,
    /// Rational argument x with nu_p(x) >= 1, e.g. "3" or "-9/4".
    #[arg(long, env = "PADICSUM_X", value_parser = parse_rational, allow_hyphen_values = true)]
    pub x: BigRational,
    /// Residue precision N; the series is reported mod p^N.
    #[arg(long, env = "PADICSUM_PRECISION", default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=64))]
    pub precision: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}
