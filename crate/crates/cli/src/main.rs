mod commands;
mod config;
mod expr;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "nsbf", version, about = "Reconstruct complex Sturm-Liouville potentials from spectral data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Experiment configuration (flat TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Overrides the configured random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Recovery option: 1, 2 or both.
    #[arg(long, value_parser = ["1", "2", "both"])]
    pub option: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic dataset from a known potential.
    Generate(Common),
    /// Reconstruct the potential from a dataset.
    Invert {
        #[command(flatten)]
        common: Common,
        /// Dataset directory or samples CSV (default: the output directory).
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Compare reconstructions with the configured potential or a reference result.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Directory holding result_option*.csv (default: the output directory).
        #[arg(long)]
        data: Option<PathBuf>,
        /// Result CSV to compare against instead of the configured potential.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Draw SVG charts of the reconstructions.
    Plot {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        data: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("solver degradation: {0}")]
    Degraded(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::BadInput(_) => 2,
            Self::Degraded(_) => 3,
            Self::Oracle(_) => 4,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Generate(c) => c,
        Command::Invert { common, .. } | Command::Verify { common, .. } | Command::Plot { common, .. } => common,
    };
    if let Some(n) = common.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Generate(c) => commands::generate(c),
        Command::Invert { common, data } => commands::invert(common, data.as_deref()),
        Command::Verify { common, data, reference } => commands::verify(common, data.as_deref(), reference.as_deref()),
        Command::Plot { common, data } => commands::plot(common, data.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
