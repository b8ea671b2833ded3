//! `gaussdim`: generate doped fermionic circuits and learn or test their
//! Gaussian dimension.
//!
//! Exit status: 0 on success, 2 when a run raised a promise or guard
//! warning, 1 on error.

mod commands;
mod records;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaussdim::protocols::learner::PROVEN_C;
use gaussdim::TomographyMode;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "gaussdim", version, about = "Test and learn fermionic unitaries of high Gaussian dimension")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random doped circuit and a sidecar with its exact singular values.
    Gen(GenArgs),
    /// Decide whether a circuit has Gaussian dimension at least k.
    Test(TestArgs),
    /// Learn a circuit of Gaussian dimension at least k.
    Learn(LearnArgs),
    /// Frobenius and diamond distance between a circuit and a circuit or learn result.
    Distance(DistanceArgs),
    /// Repeat test or learn on fresh random instances and aggregate.
    Bench(BenchArgs),
}

#[derive(Args)]
pub struct GenArgs {
    /// Number of fermionic modes.
    #[arg(long)]
    pub n: usize,
    /// Number of non-Gaussian gates.
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Locality of each non-Gaussian gate, in modes.
    #[arg(long, default_value_t = 1)]
    pub kappa: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Circuit path; the sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyChoice {
    /// Binomial at the tester's shot count, or the surrogate at the learner's α.
    Default,
    Exact,
    /// Binomial draws; `--shots` per entry, else the command's formula.
    Binomial,
    /// Exact matrix plus normal noise; `--alpha`, else the command's accuracy target.
    Surrogate,
}

#[derive(Args, Clone)]
pub struct PolicyArgs {
    #[arg(long, value_enum, default_value_t = PolicyChoice::Default)]
    pub policy: PolicyChoice,
    /// Shots per correlation-matrix entry for the binomial policy.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Operator-norm error scale for the surrogate policy.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Args)]
pub struct TestArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Target dimension; defaults to the circuit's 2n − 2κt.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TomographyChoice {
    Exact,
    Sampled,
}

impl From<TomographyChoice> for TomographyMode {
    fn from(c: TomographyChoice) -> Self {
        match c {
            TomographyChoice::Exact => TomographyMode::Exact,
            TomographyChoice::Sampled => TomographyMode::Sampled,
        }
    }
}

#[derive(Args)]
pub struct LearnArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Promised dimension; defaults to the circuit's 2n − 2κt.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Constant in the accuracy target α; values below the proven one are heuristic.
    #[arg(long, default_value_t = PROVEN_C)]
    pub c: f64,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, value_enum, default_value_t = TomographyChoice::Exact)]
    pub tomography: TomographyChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct DistanceArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// A circuit file or a learn result.
    #[arg(long)]
    pub against: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchMode {
    Test,
    Learn,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = BenchMode::Learn)]
    pub mode: BenchMode,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long, default_value_t = 1)]
    pub kappa: usize,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = PROVEN_C)]
    pub c: f64,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, value_enum, default_value_t = TomographyChoice::Exact)]
    pub tomography: TomographyChoice,
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    /// Master seed; repetition i uses ChaCha stream i of it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write each repetition's record into this directory.
    #[arg(long)]
    pub rep_dir: Option<PathBuf>,
}

fn run(cli: Cli) -> anyhow::Result<commands::Warned> {
    match cli.command {
        Command::Gen(args) => commands::gen(&args),
        Command::Test(args) => commands::test(&args),
        Command::Learn(args) => commands::learn_cmd(&args),
        Command::Distance(args) => commands::distance(&args),
        Command::Bench(args) => commands::bench(&args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
