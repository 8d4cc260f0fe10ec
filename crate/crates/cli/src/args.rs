use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "udesign",
    version,
    about = "Construct and verify generalized group unitary t-designs"
)]
pub struct Cli {
    /// Emit the report as JSON on standard output.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for every random probe.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the rotated-monomial 2-design in dimension d.
    #[command(name = "construct-2design")]
    Construct2Design(ConstructArgs),
    /// Compare a design's t-fold twirl with the Haar twirl.
    Verify(VerifyArgs),
    /// Tabulate the quadratic Gauss sums against brute-force evaluation.
    Gauss(GaussArgs),
    /// Check the character conditions for a list of groups.
    #[command(name = "check-group")]
    CheckGroup(CheckGroupArgs),
    /// Lift a real orthogonal design to a unitary one.
    Lift(LiftArgs),
    /// Estimate the relative error ε of a design's twirl.
    Epsilon(EpsilonArgs),
    /// Write a catalogued group as a design or generator file.
    #[command(name = "export-group")]
    ExportGroup(ExportArgs),
}

fn positive_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("tolerance must be a positive number, got {s:?}")),
    }
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long = "dim", value_parser = clap::value_parser!(u64).range(2..=64))]
    pub dim: u64,
    /// Where to write the design; standard output when omitted and neither --verify nor --json is given.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run both verification paths at t = 2 (d ≤ 6).
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 1e-9, value_parser = positive_tol)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub design: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
    pub t: u64,
    #[arg(long, default_value_t = 1e-9, value_parser = positive_tol)]
    pub tol: f64,
    /// Use this many Gaussian probes instead of the full matrix-unit basis.
    #[arg(long)]
    pub probes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GaussArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=4096))]
    pub from: u64,
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u64).range(1..=4096))]
    pub to: u64,
}

#[derive(Debug, Args)]
pub struct CheckGroupArgs {
    /// Character table JSON file (repeatable).
    #[arg(long = "table")]
    pub tables: Vec<PathBuf>,
    /// Generator JSON file (repeatable).
    #[arg(long = "generators")]
    pub generators: Vec<PathBuf>,
    /// Catalogued group name (repeatable).
    #[arg(long = "name")]
    pub names: Vec<String>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
    pub t: u64,
    #[arg(long = "dim", value_parser = clap::value_parser!(u64).range(1..=64))]
    pub dim: u64,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    #[arg(long)]
    pub design: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=3))]
    pub t: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EpsilonArgs {
    #[arg(long)]
    pub design: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=2))]
    pub t: u64,
    /// The design passes when ε is at most this value.
    #[arg(long, default_value_t = 1e-8, value_parser = positive_tol)]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ExportFormat {
    Design,
    Generators,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub name: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ExportFormat::Design)]
    pub format: ExportFormat,
    /// Keep one element per global phase class.
    #[arg(long)]
    pub mod_phase: bool,
}
