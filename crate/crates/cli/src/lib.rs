//! The `qecvar` command line: closed forms, Monte Carlo runs, the symbolic
//! verification suite, σ sweeps and weight-curve tables.
//!
//! Exit codes: 0 when every check passed, 1 when a verification or
//! estimator assertion failed, 2 for usage, configuration and I/O errors.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use config::{CliConfig, Command, CommonArgs, Extras};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] qecvar::Error),
}

impl CliError {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Core(_) => EXIT_FAILED,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qecvar", version, about = "Continuous errors on the 5-qubit code")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Subcommand, Debug)]
pub enum Sub {
    /// Closed forms and quadrature for one distribution
    Analytic(CommonArgs),
    /// Monte Carlo estimators
    Mc(McArgs),
    /// Exact symbolic verification suite
    Verify(VerifyArgs),
    /// Analytic and Monte Carlo values over a list of sigmas
    Sweep(SweepArgs),
    /// Weight functions of the variance and the quantum variance
    Weights(WeightsArgs),
}

#[derive(Args, Debug)]
pub struct McArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Also run the central-symmetry check for every nonzero syndrome
    #[arg(long)]
    pub symmetry: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Flip the sign of one entry of M before verifying
    #[arg(long, hide = true)]
    pub corrupt_m: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated sigma values
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub sigmas: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct WeightsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of equally spaced points on [0, pi]
    #[arg(long)]
    pub grid: Option<usize>,
}

fn generated_seed() -> u64 {
    rand::random()
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (command, common, extras) = match cli.command {
        Sub::Analytic(c) => (Command::Analytic, c, Extras::default()),
        Sub::Mc(a) => (
            Command::Mc,
            a.common,
            Extras {
                symmetry: a.symmetry,
                ..Default::default()
            },
        ),
        Sub::Verify(a) => (
            Command::Verify,
            a.common,
            Extras {
                corrupt_m: a.corrupt_m,
                ..Default::default()
            },
        ),
        Sub::Sweep(a) => (
            Command::Sweep,
            a.common,
            Extras {
                sigmas: a.sigmas,
                ..Default::default()
            },
        ),
        Sub::Weights(a) => (
            Command::Weights,
            a.common,
            Extras {
                grid: a.grid,
                ..Default::default()
            },
        ),
    };
    let result = CliConfig::resolve(command, &common, extras, generated_seed).and_then(|cfg| {
        if cfg.seed_generated {
            eprintln!("seed: {} (generated)", cfg.seed.expect("seed present"));
        }
        commands::dispatch(&cfg)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
