use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "iontrap-teleport",
    version,
    about = "Probabilistic two-ion teleportation through partially entangled trapped-ion pairs",
    after_help = "Exit status: 0 ok, 1 i/o error, 2 parse/usage error, 3 validation error, 4 invariant failure (verify)."
)]
pub struct Cli {
    /// Worker threads for sampled shots, sweep points and verify trials.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the protocol once and report every Alice branch.
    Run(RunArgs),
    /// Tabulate the success probability over a grid of |b|² and |d|².
    Sweep(SweepArgs),
    /// Check the core invariants on randomly drawn parameters.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Enumerate,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Input-state amplitudes, `re+im i` or `mag@phase`.
#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write results here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
    /// Channel (3,4) amplitude of |ee⟩.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Channel (3,4) amplitude of |gg⟩.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Channel (5,6) amplitude of |ee⟩.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Channel (5,6) amplitude of |gg⟩.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Shots in sample mode.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fock truncation of the phonon mode.
    #[arg(long)]
    pub mode_dim: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
    /// Channel phases θ₁..θ₄ (arguments of a, b, c, d), radians.
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta3: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta4: Option<f64>,
    /// Largest |b|² on the grid; points are max·i/steps for i = 1..=steps.
    #[arg(long)]
    pub b2_max: Option<f64>,
    #[arg(long)]
    pub b2_steps: Option<usize>,
    #[arg(long)]
    pub d2_max: Option<f64>,
    #[arg(long)]
    pub d2_steps: Option<usize>,
    /// Explicit |b|² values (comma separated); overrides max/steps.
    #[arg(long, value_delimiter = ',')]
    pub b2_values: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub d2_values: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub mode_dim: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = iontrap_teleport::protocol::DEFAULT_MODE_DIM)]
    pub mode_dim: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}
