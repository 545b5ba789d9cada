mod commands;
mod config;
mod table;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Params, UsageError};

/// Generalized phase coherent states: evaluation and verification.
#[derive(Debug, Parser)]
#[command(name = "gpcs", version)]
struct Cli {
    /// `key = value` file supplying defaults for the flags below
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    params: Params,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate a coherent-state wavefunction on an x-grid
    EvalState,
    /// Run a verification suite and print JSON-lines reports
    Verify {
        /// specfun, pho, cjacobi, gpcs, identity, transform or all
        suite: String,
    },
    /// Tabulate transform images of an eigenstate on a θ-grid
    Transform,
    /// Tabulate the oscillator spectrum
    Spectrum,
    /// Tabulate the circular-Jacobi Gram diagonal
    Gram,
}

pub enum CliError {
    Usage(UsageError),
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(u) => write!(f, "usage error: {u}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<UsageError> for CliError {
    fn from(e: UsageError) -> Self {
        CliError::Usage(e)
    }
}

impl From<gpcs::Error> for CliError {
    fn from(e: gpcs::Error) -> Self {
        match e {
            gpcs::Error::InvalidParam { .. } | gpcs::Error::Domain { .. } => CliError::Usage(UsageError(e.to_string())),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("GPCS_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(UsageError(format!("GPCS_THREADS must be a positive integer, got `{v}`"))))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let params = match &cli.config {
        Some(path) => cli.params.clone().merge_file(path)?,
        None => cli.params.clone(),
    };
    let output = match &cli.command {
        Command::EvalState => commands::eval_state(&params)?,
        Command::Verify { suite } => commands::verify(suite, &params)?,
        Command::Transform => commands::transform(&params)?,
        Command::Spectrum => commands::spectrum(&params)?,
        Command::Gram => commands::gram(&params)?,
    };
    table::emit(&output.text, params.out.as_deref()).map_err(|e| CliError::Runtime(format!("cannot write output: {e}")))?;
    Ok(output.ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Runtime(_) => ExitCode::from(1),
            }
        }
    }
}
