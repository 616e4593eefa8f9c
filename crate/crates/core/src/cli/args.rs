use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "bma",
    version,
    about = "Adaptive MC3 and Gibbs samplers for Bayesian model averaging"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded simulated dataset and its true model.
    Simulate(SimulateArgs),
    /// Run a grid of samplers and write report, PIP and trace files.
    Run(RunArgs),
    /// Exact posterior by enumeration for small p.
    Enumerate(EnumerateArgs),
    /// Join PIP files and report the largest disagreements.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GModeArg {
    Bric,
    Hyper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonArg {
    Fixed,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresetArg {
    Desk,
    Paper,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long, default_value_t = 40)]
    pub p: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Drop the noise term from the response.
    #[arg(long)]
    pub noise_free: bool,
    #[arg(long)]
    pub out: PathBuf,
}

/// Flags shared by `run` and `enumerate`. All optional so that a config file
/// can supply them.
#[derive(Debug, Args, Default, Clone)]
pub struct DataArgs {
    /// Dataset CSV; when absent a dataset is simulated.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Response column of the CSV.
    #[arg(long)]
    pub response: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub noise_free: bool,
    /// Prior mean model size.
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, value_enum)]
    pub g_mode: Option<GModeArg>,
    /// Hyper-g/n parameter.
    #[arg(long)]
    pub a: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct RunArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Comma-separated samplers: mc3, admc3-s2, admc3-m, gibbs, adgibbs-s2,
    /// adgibbs-m, or `all`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub iterations: Option<u64>,
    #[arg(long)]
    pub burn_in: Option<u64>,
    #[arg(long)]
    pub thin: Option<u64>,
    #[arg(long)]
    pub block_len: Option<usize>,
    #[arg(long)]
    pub start_block: Option<usize>,
    #[arg(long, value_enum)]
    pub epsilon: Option<EpsilonArg>,
    /// ε for the fixed schedule (default 1/p).
    #[arg(long)]
    pub epsilon_value: Option<f64>,
    /// Comma-separated replication seeds.
    #[arg(long)]
    pub seeds: Option<String>,
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with any of the above as keys; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a `run --config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfigFile {
    pub csv: Option<PathBuf>,
    pub response: Option<String>,
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub noise_free: Option<bool>,
    pub kappa: Option<f64>,
    pub g_mode: Option<GModeArg>,
    pub a: Option<f64>,
    pub grid: Option<String>,
    pub iterations: Option<u64>,
    pub burn_in: Option<u64>,
    pub thin: Option<u64>,
    pub block_len: Option<usize>,
    pub start_block: Option<usize>,
    pub epsilon: Option<EpsilonArg>,
    pub epsilon_value: Option<f64>,
    pub seeds: Option<String>,
    pub preset: Option<PresetArg>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl RunArgs {
    /// Fills every flag left unset from `file`.
    pub fn merge(mut self, file: RunConfigFile) -> Self {
        fn fill<T>(slot: &mut Option<T>, v: Option<T>) {
            if slot.is_none() {
                *slot = v;
            }
        }
        let d = &mut self.data;
        fill(&mut d.csv, file.csv);
        fill(&mut d.response, file.response);
        fill(&mut d.n, file.n);
        fill(&mut d.p, file.p);
        d.noise_free |= file.noise_free.unwrap_or(false);
        fill(&mut d.kappa, file.kappa);
        fill(&mut d.g_mode, file.g_mode);
        fill(&mut d.a, file.a);
        fill(&mut self.grid, file.grid);
        fill(&mut self.iterations, file.iterations);
        fill(&mut self.burn_in, file.burn_in);
        fill(&mut self.thin, file.thin);
        fill(&mut self.block_len, file.block_len);
        fill(&mut self.start_block, file.start_block);
        fill(&mut self.epsilon, file.epsilon);
        fill(&mut self.epsilon_value, file.epsilon_value);
        fill(&mut self.seeds, file.seeds);
        fill(&mut self.preset, file.preset);
        fill(&mut self.jobs, file.jobs);
        fill(&mut self.out, file.out);
        self
    }
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Seed of the simulated dataset.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Condition on this g instead of the prior's choice.
    #[arg(long)]
    pub g: Option<f64>,
    /// Quadrature points for g under hyper-g/n.
    #[arg(long, default_value_t = 200)]
    pub grid_points: usize,
    /// Number of models in the top-model table.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// PIP files written by `run` or `enumerate`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub pips: Vec<PathBuf>,
    /// Exact PIP file; when given every method is compared to it.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Long-format output CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Largest tolerated absolute PIP gap.
    #[arg(long, default_value_t = 0.02)]
    pub threshold: f64,
}
