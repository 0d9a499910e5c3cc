//! Command-line front end for `multiconc`.
//!
//! Exit codes: 0 success, 2 input error (unreadable or malformed state file,
//! bad arguments), 3 class or shape mismatch, 4 check-suite failure.

pub mod commands;
pub mod statefile;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use commands::{run, Output};
pub use statefile::{AmplitudeRecord, StateFile, StateFileError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
pub const EXIT_CHECK: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

impl From<multiconc::Error> for CliError {
    fn from(e: multiconc::Error) -> Self {
        use multiconc::Error as E;
        match e {
            E::TooFewParts { .. }
            | E::WrongArity { .. }
            | E::TooLarge { .. }
            | E::NotOptimizable(_)
            | E::UnequalDims(_) => CliError::Mismatch(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<StateFileError> for CliError {
    fn from(e: StateFileError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "multiconc", version, about = "Concurrence classes of pure multipartite states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute class concurrences of a state file.
    Compute(ComputeArgs),
    /// Class values, optimized GHZ values and a verdict.
    Classify(ClassifyArgs),
    /// Run invariance and equivalence checks.
    Check(CheckArgs),
    /// Emit a random or named state file.
    Random(RandomArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Epr,
    W,
    Ghz,
    GhzReduced,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    #[arg(long)]
    pub norm_epr: Option<f64>,
    #[arg(long)]
    pub norm_w: Option<f64>,
    #[arg(long)]
    pub norm_ghz: Option<f64>,
    #[arg(long)]
    pub norm_ghz_reduced: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    /// State file (JSON, 1-based indices).
    pub file: std::path::PathBuf,
    #[arg(long, value_enum, default_value_t = ClassArg::All)]
    pub class: ClassArg,
    #[command(flatten)]
    pub norm: NormArgs,
    #[arg(long, conflicts_with = "table")]
    pub json: bool,
    #[arg(long)]
    pub table: bool,
    /// Include per-operator contributions.
    #[arg(long)]
    pub breakdown: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    pub file: std::path::PathBuf,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = multiconc::optimizer::GENUINE_THRESHOLD)]
    pub threshold: f64,
    #[command(flatten)]
    pub norm: NormArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Slocc,
    Permutation,
    Square,
    Oracle,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    /// W values under random local unitaries.
    LuW,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Defaults to `all` unless only an experiment is requested.
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub experiment: Option<Experiment>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RandomArgs {
    /// Comma-separated local dimensions, e.g. `2,3`.
    #[arg(long, value_delimiter = ',', conflicts_with = "named")]
    pub dims: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `w:M`, `ghz:M`, `ghz:M:D` or `bell`.
    #[arg(long)]
    pub named: Option<String>,
}
