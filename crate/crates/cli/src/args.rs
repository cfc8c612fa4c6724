use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Default seed for every seeded command.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(
    name = "loadshare",
    version,
    about = "Load-sharing parallel system estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a dataset of inter-failure spacings (CSV on --out or stdout).
    Simulate(SimulateArgs),
    /// Fit the closed-form maximum-likelihood estimates to a dataset.
    Fit(FitArgs),
    /// Compare closed-form estimates with the numeric maximizer.
    Verify(VerifyArgs),
    /// Monte Carlo parameter-recovery study.
    McStudy(McStudyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    #[value(name = "kim-kvam")]
    KimKvam,
    #[value(name = "ssk")]
    Ssk,
}

impl ModelArg {
    pub fn name(self) -> &'static str {
        match self {
            ModelArg::KimKvam => "kim-kvam",
            ModelArg::Ssk => "ssk",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    Json,
    #[default]
    Text,
}

/// Model and true parameters, given by flags or by a params file.
#[derive(Debug, Clone, Args)]
pub struct TruthArgs {
    #[arg(long, value_enum, required_unless_present = "params")]
    pub model: Option<ModelArg>,
    /// Component count.
    #[arg(long, required_unless_present = "params")]
    pub k: Option<usize>,
    /// Switch index (SSK only).
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(
        long,
        required_unless_present = "params",
        allow_negative_numbers = true
    )]
    pub theta: Option<f64>,
    /// Comma-separated λ_1,…,λ_{k-1}.
    #[arg(
        long,
        value_delimiter = ',',
        required_unless_present = "params",
        allow_negative_numbers = true
    )]
    pub lambda: Option<Vec<f64>>,
    /// JSON params file; replaces --model/--k/--s/--theta/--lambda.
    #[arg(long, conflicts_with_all = ["model", "k", "s", "theta", "lambda"])]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub truth: TruthArgs,
    /// Number of systems.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub s: Option<usize>,
    /// CSV dataset with a t1..tk (spacings) or x1..xk (lifetimes) header.
    #[arg(long)]
    pub data: PathBuf,
    /// Treat a headerless file as raw lifetimes.
    #[arg(long)]
    pub lifetimes: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Switch index for --data runs; random instances draw their own.
    #[arg(long, conflicts_with = "random")]
    pub s: Option<usize>,
    #[arg(long, required_unless_present = "random", conflicts_with = "random")]
    pub data: Option<PathBuf>,
    #[arg(long, requires = "data")]
    pub lifetimes: bool,
    /// Verify on seeded random instances instead of a dataset.
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 50, requires = "random")]
    pub instances: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Maximum coordinate-ascent sweeps.
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
    /// Relative parameter change per sweep that counts as converged.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct McStudyArgs {
    #[command(flatten)]
    pub truth: TruthArgs,
    /// Systems per replicate (at least 2).
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub reps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}
