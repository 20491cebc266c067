//! `robust-scale`: robust scale estimates, factor calibration, efficiency
//! studies and prediction-equation fits from the command line.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage or input error,
//! 130 interrupted (partial output ends with `#truncated`).

mod commands;
mod input;
mod manifest;
mod ranges;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use robust_scale::fitting::{FitWindow, Parity};
use robust_scale::montecarlo::DEFAULT_SEED;
use robust_scale::{CorrectionModel, EstimatorKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] robust_scale::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Internal(String),
    #[error("interrupted")]
    Interrupted,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use robust_scale::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                E::Output(_) | E::DegenerateDistribution => 1,
                _ => 2,
            },
            CliError::Io(_) | CliError::Internal(_) => 1,
            CliError::Interrupted => 130,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NList(pub Vec<usize>);

fn n_list(s: &str) -> Result<NList, String> {
    ranges::parse_n_list(s).map(NList)
}

fn window(s: &str) -> Result<FitWindow, String> {
    ranges::parse_window(s)
}

fn estimator(s: &str) -> Result<EstimatorKind, String> {
    s.parse()
}

fn model(s: &str) -> Result<CorrectionModel, String> {
    s.parse()
}

fn parity(s: &str) -> Result<Parity, String> {
    s.parse()
}

#[derive(Debug, Parser)]
#[command(name = "robust-scale", version, about = "Robust scale estimation (MAD, Sn, Qn)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate scale from numbers on stdin or in a file
    Estimate(EstimateArgs),
    /// Monte-Carlo calibration of finite-sample factors
    Calibrate(CalibrateArgs),
    /// Monte-Carlo Gaussian efficiencies relative to the unbiased SD
    Efficiency(EfficiencyArgs),
    /// Fit 1 + alpha/n + beta/n^2 to a factor CSV
    Fit(FitArgs),
    /// Largest factor difference between two correction models
    CompareModels(CompareArgs),
    /// Print a correction-factor table
    Table(TableArgs),
    /// Re-run a recorded simulation and check its output digest
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Input file; stdin when absent or `-`
    pub input: Option<PathBuf>,
    /// Comma-separated subset of mad,sn,qn,sd [default: all defined for the model]
    #[arg(long, value_delimiter = ',', value_parser = estimator)]
    pub estimators: Option<Vec<EstimatorKind>>,
    #[arg(long, default_value = "refined", value_parser = model)]
    pub model: CorrectionModel,
    /// Skip NA/NaN/null entries instead of failing
    #[arg(long)]
    pub drop_missing: bool,
}

#[derive(Debug, Args)]
pub struct SimulationArgs {
    /// Sample sizes, e.g. `2..20`, `5,10,50` or `2..10,100`
    #[arg(long, value_parser = n_list)]
    pub n: NList,
    #[arg(long, default_value_t = 100_000)]
    pub reps: u64,
    #[arg(long, env = "ROBUST_SCALE_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads [default: available cores]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output CSV; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Manifest path [default: <out>.manifest.json; none for stdout]
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// No progress on stderr
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub sim: SimulationArgs,
    #[arg(long, value_delimiter = ',', default_value = "sn,qn", value_parser = estimator)]
    pub estimators: Vec<EstimatorKind>,
    /// Also write `n,estimator,mean,variance,std_variance,factor,se` rows here
    #[arg(long)]
    pub moments_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EfficiencyArgs {
    #[command(flatten)]
    pub sim: SimulationArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Factor CSV with `n` and `factor` columns; stdin when `-`
    pub input: PathBuf,
    /// Fit one parity only [default: both]
    #[arg(long, value_parser = parity)]
    pub parity: Option<Parity>,
    /// Inclusive n range used for the fit
    #[arg(long, default_value = "101..1000", value_parser = window)]
    pub window: FitWindow,
    /// Use rows of this estimator only
    #[arg(long, value_parser = estimator)]
    pub estimator: Option<EstimatorKind>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_parser = estimator)]
    pub estimator: EstimatorKind,
    /// Two models, e.g. `refined,croux1992`
    #[arg(long, value_delimiter = ',', num_args = 1, required = true, value_parser = model)]
    pub models: Vec<CorrectionModel>,
    #[arg(long, default_value = "2..100", value_parser = n_list)]
    pub n: NList,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_parser = estimator)]
    pub estimator: EstimatorKind,
    #[arg(long, default_value = "refined", value_parser = model)]
    pub model: CorrectionModel,
    #[arg(long, default_value = "2..100", value_parser = n_list)]
    pub n: NList,
    /// Print the published simulation table instead (Sn or Qn)
    #[arg(long, conflicts_with_all = ["model", "n"])]
    pub published: bool,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::new()
        .filter_level(log::LevelFilter::Warn)
        .parse_default_env()
        .init();
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match commands::run(cli, &argv[1..]) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Interrupted) {
                eprintln!("error: {e}");
            } else {
                eprintln!("interrupted; partial output marked #truncated");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
