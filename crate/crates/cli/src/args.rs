use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bingham",
    version,
    about = "Exact Bayesian inference for the Bingham distribution"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate unit vectors from a Bingham distribution.
    Simulate(SimulateArgs),
    /// Sample the posterior of the concentrations with the exchange algorithm.
    Fit(FitArgs),
    /// Autocorrelation table for a chain file.
    Diagnose(DiagnoseArgs),
    /// Compare two posteriors through the distribution of their differences.
    Compare(CompareArgs),
    /// Quadrature normalising constant and moments (q = 2 or 3).
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Ordered concentrations l1,...,l_{q-1}.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub lambda: Vec<f64>,
    /// Number of vectors.
    #[arg(long)]
    pub n: usize,
    /// Envelope tuning constant, 0 < b <= q.
    #[arg(long, default_value_t = 1.0, conflicts_with = "tune_b")]
    pub b: f64,
    /// Choose b numerically to maximise the acceptance probability.
    #[arg(long)]
    pub tune_b: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output CSV (one vector per row, no header).
    #[arg(long)]
    pub out: PathBuf,
}

/// Sufficient statistics of the data sets analysed in the literature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// n = 100, tau = (0.30, 0.32).
    Dataset1,
    /// n = 100, tau = (0.02, 0.40).
    Dataset2,
    /// Christchurch earthquakes before the February 2011 event (A axes).
    Cca,
    /// Christchurch earthquakes after the February 2011 event (A axes).
    Ccb,
    /// Northern South Island earthquakes (A axes).
    Si,
}

impl Preset {
    pub fn stats(self) -> (usize, [f64; 2]) {
        match self {
            Preset::Dataset1 => (100, [0.30, 0.32]),
            Preset::Dataset2 => (100, [0.02, 0.40]),
            Preset::Cca => (50, [0.1152360, 0.1571938]),
            Preset::Ccb => (50, [0.1127693, 0.1987671]),
            Preset::Si => (32, [0.2288201, 0.3035098]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Dataset1 => "dataset1",
            Preset::Dataset2 => "dataset2",
            Preset::Cca => "cca",
            Preset::Ccb => "ccb",
            Preset::Si => "si",
        }
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["data", "suff", "preset"])))]
pub struct FitArgs {
    /// Data CSV of unit vectors.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Sufficient statistics n,tau1,...,tau_{q-1}.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub suff: Option<Vec<f64>>,
    /// Built-in sufficient statistics.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Exponential prior rates mu1,...,mu_{q-1} (default 0.01 each).
    #[arg(long, value_delimiter = ',')]
    pub prior_rate: Option<Vec<f64>>,
    /// Random-walk proposal variance per coordinate.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub iters: usize,
    #[arg(long, default_value_t = 10)]
    pub thin: usize,
    /// Burn-in iterations (default: iters / 10).
    #[arg(long)]
    pub burnin: Option<usize>,
    #[arg(long, default_value_t = 1.0, conflicts_with = "tune_b")]
    pub b: f64,
    /// Re-tune b for every proposed parameter value.
    #[arg(long)]
    pub tune_b: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Starting point l1,...,l_{q-1} (default: all zeros).
    #[arg(long, value_delimiter = ',')]
    pub init: Option<Vec<f64>>,
    /// Credible interval level.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long)]
    pub out_chain: PathBuf,
    #[arg(long)]
    pub out_summary: PathBuf,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub chain: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub max_lag: usize,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub chain_a: PathBuf,
    #[arg(long)]
    pub chain_b: PathBuf,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub lambda: Vec<f64>,
    #[arg(long, default_value_t = 1024)]
    pub grid_theta: usize,
    #[arg(long, default_value_t = 1024)]
    pub grid_phi: usize,
}
