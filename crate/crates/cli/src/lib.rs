//! Command-line front end for `arma-spectra`.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::ExperimentConfig;

pub const THREADS_ENV: &str = "LDS_SPECTRA_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: arma_spectra::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn core(context: impl Into<String>, source: arma_spectra::Error) -> Self {
        CliError::Core { context: context.into(), source }
    }

    /// 2 usage, 3 data, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Core { source, .. } if source.is_numerical() => 4,
            CliError::Core { source: arma_spectra::Error::InvalidParams(_), .. } => 2,
            CliError::Core { .. } => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "arma-spectra", version, about = "Estimate LDS eigenvalues from output series and cluster series by AR parameters")]
pub struct Cli {
    /// Flat JSON file of default settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a clustered benchmark of random systems and their output series.
    Simulate(SimulateArgs),
    /// Fit AR parameters to every series.
    Fit(FitArgs),
    /// Estimate eigenvalues of every series, with condition bounds.
    Eigs(EigsArgs),
    /// Cluster series by fitted AR parameters.
    Cluster(ClusterArgs),
    /// Run the convergence, perturbation, correlation and clustering studies.
    Bench(BenchArgs),
}

#[derive(Debug, Args, Default)]
pub struct FitOpts {
    /// Series CSV (series_id,t,channel,value).
    #[arg(long)]
    pub series: Option<PathBuf>,
    /// Observed inputs CSV in the same format.
    #[arg(long)]
    pub inputs: Option<PathBuf>,
    /// Model order (hidden state dimension).
    #[arg(long)]
    pub n: Option<usize>,
    /// Ridge penalty on the moving-average coefficients.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// arma or ar.
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub clusters: Option<usize>,
    #[arg(long)]
    pub systems: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub len: Option<usize>,
    /// Output noise standard deviation.
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for series.csv, labels.csv and spectra.csv.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub fit: FitOpts,
    /// Output CSV of AR parameters per series.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EigsArgs {
    #[command(flatten)]
    pub fit: FitOpts,
    /// Output spectra CSV (series_id,re,im).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional per-eigenvalue table with condition bounds.
    #[arg(long)]
    pub bounds: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub fit: FitOpts,
    #[arg(long)]
    pub clusters: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Ground-truth labels CSV (series_id,label).
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Output labels CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output metrics JSON.
    #[arg(long)]
    pub metrics: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// all, convergence, perturbation, correlation or clustering.
    #[arg(long)]
    pub study: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub lens: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Benchmark draws for the clustering study.
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub clusters: Option<usize>,
    #[arg(long)]
    pub systems: Option<usize>,
    #[arg(long)]
    pub len: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

impl FitOpts {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            series: self.series.clone(),
            inputs: self.inputs.clone(),
            n: self.n,
            alpha: self.alpha,
            method: self.method.clone(),
            ..Default::default()
        }
    }
}

impl Command {
    /// Settings given as flags.
    pub fn flags(&self) -> ExperimentConfig {
        match self {
            Command::Simulate(a) => ExperimentConfig {
                clusters: a.clusters,
                systems: a.systems,
                n: a.n,
                m: a.m,
                k: a.k,
                len: a.len,
                noise: a.noise,
                seed: a.seed,
                out_dir: a.out_dir.clone(),
                ..Default::default()
            },
            Command::Fit(a) => ExperimentConfig { out: a.out.clone(), ..a.fit.config() },
            Command::Eigs(a) => ExperimentConfig { out: a.out.clone(), bounds: a.bounds.clone(), ..a.fit.config() },
            Command::Cluster(a) => ExperimentConfig {
                clusters: a.clusters,
                seed: a.seed,
                truth: a.truth.clone(),
                out: a.out.clone(),
                metrics: a.metrics.clone(),
                ..a.fit.config()
            },
            Command::Bench(a) => ExperimentConfig {
                study: a.study.clone(),
                n: a.n,
                lens: a.lens.clone(),
                eps: a.eps.clone(),
                trials: a.trials,
                seeds: a.seeds,
                clusters: a.clusters,
                systems: a.systems,
                len: a.len,
                alpha: a.alpha,
                seed: a.seed,
                out_dir: a.out_dir.clone(),
                ..Default::default()
            },
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    // a pool may already exist when called repeatedly in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    let file = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let cfg = cli.command.flags().over(file);
    cfg.validate()?;
    match &cli.command {
        Command::Simulate(_) => commands::simulate(&cfg),
        Command::Fit(_) => commands::fit(&cfg),
        Command::Eigs(_) => commands::eigs(&cfg),
        Command::Cluster(_) => commands::cluster(&cfg),
        Command::Bench(_) => commands::bench(&cfg),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
