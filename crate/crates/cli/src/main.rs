use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fekete_core::{Domain, Method};

mod commands;
mod output;

#[derive(Debug, Parser)]
#[command(name = "fekete", version, about = "Degree-one Fekete points and Lebesgue constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit the Fekete point set of a domain.
    Points(PointsArgs),
    /// Compute a Lebesgue constant.
    Lebesgue(LebesgueArgs),
    /// Run every check for a domain; exit 1 if any fails.
    Verify(VerifyArgs),
    /// Lebesgue constants over a range of dimensions.
    Sweep(SweepArgs),
    /// Emit a Hadamard matrix of a given order, or check one read from a file.
    Hadamard(HadamardArgs),
    /// Emit an extremal witness for d = m² − 1.
    Witness(WitnessArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Simplex,
    Ball,
    Cube,
    Torus,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::Simplex => Domain::Simplex,
            DomainArg::Ball => Domain::Ball,
            DomainArg::Cube => Domain::Cube,
            DomainArg::Torus => Domain::Torus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Enumerate,
    Sample,
    Witness,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Exact => Method::ClosedForm,
            MethodArg::Enumerate => Method::Enumeration,
            MethodArg::Sample => Method::Sampling,
            MethodArg::Witness => Method::Witness,
        }
    }
}

impl fmt::Display for MethodArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct PointsArgs {
    #[arg(long, value_enum)]
    pub domain: DomainArg,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub dim: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LebesgueArgs {
    #[arg(long, value_enum)]
    pub domain: DomainArg,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub dim: Option<u64>,
    /// Witness order; the dimension is m² − 1.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: Option<u64>,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub domain: DomainArg,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub dim: u64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Perturbation trials of the local Fekete probe (run for d ≤ 8).
    #[arg(long, default_value_t = 1_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Replace the tolerance of every check.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub domain: DomainArg,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Dimensions, e.g. `1..10` (inclusive) or `3,7,15`.
    #[arg(long, value_parser = parse_list, conflicts_with = "ms")]
    pub dims: Option<DimList>,
    /// Witness orders m, giving d = m² − 1.
    #[arg(long, value_parser = parse_list)]
    pub ms: Option<DimList>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HadamardArgs {
    #[arg(long, required_unless_present = "check", conflicts_with = "check")]
    pub order: Option<usize>,
    /// Validate the matrix in this JSON (`[[...]]` or `{"rows": [[...]]}`) or CSV file.
    #[arg(long)]
    pub check: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long, value_enum)]
    pub domain: DomainArg,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct DimList(pub Vec<usize>);

/// Comma-separated items, each a number or an inclusive range `a..b`.
fn parse_list(s: &str) -> Result<DimList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(DimList(out))
}

/// Bad input that maps to exit code 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    use fekete_core::Error as E;
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<E>() {
        Some(
            E::Domain(_)
            | E::UnsupportedDomain(_)
            | E::Resource(_)
            | E::Length { .. }
            | E::Shape(_)
            | E::ScalarKind,
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Points(a) => commands::points(&a),
        Command::Lebesgue(a) => commands::lebesgue(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Hadamard(a) => commands::hadamard(&a),
        Command::Witness(a) => commands::witness(&a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
