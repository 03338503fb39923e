//! Run configuration: command-line flags layered over an optional config
//! file layered over defaults, validated before anything runs.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use qecvar::errormodel::ErrorDistribution;

use crate::CliError;

pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_WORKERS: usize = 1;
pub const DEFAULT_GRID: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistKind {
    Normal,
    Uniform,
    Table,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Flags shared by every subcommand. Each is optional so that a config
/// file can supply it.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// Flat key = value file (TOML syntax) with defaults for these flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Error distribution of the first angle
    #[arg(long, value_enum)]
    pub dist: Option<DistKind>,
    /// Parameter of the normal family, in [0, 1)
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Density table with header `theta0,f`, for --dist table
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Number of qubits carrying the error (1 or 5)
    #[arg(long)]
    pub n: Option<u32>,
    /// Monte Carlo sample count
    #[arg(long)]
    pub samples: Option<u64>,
    /// Seed for every random draw; generated and reported when absent
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on this
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Keys accepted in a config file. Anything else is rejected.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub dist: Option<DistKind>,
    pub sigma: Option<f64>,
    pub table: Option<PathBuf>,
    pub n: Option<u32>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub grid: Option<usize>,
    pub sigmas: Option<Vec<f64>>,
    pub symmetry: Option<bool>,
}

/// Parses the text of a config file.
pub fn parse_config_text(text: &str) -> Result<FileConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::Usage(format!("config file: {}", e.message())))
}

pub fn load_config_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analytic,
    Mc,
    Verify,
    Sweep,
    Weights,
}

impl Command {
    fn uses_randomness(self) -> bool {
        matches!(self, Command::Mc | Command::Sweep)
    }

    fn needs_distribution(self) -> bool {
        matches!(self, Command::Analytic | Command::Mc | Command::Sweep)
    }
}

/// Subcommand-specific values that may also come from the config file.
#[derive(Clone, Debug, Default)]
pub struct Extras {
    pub grid: Option<usize>,
    pub sigmas: Option<Vec<f64>>,
    pub symmetry: bool,
    pub corrupt_m: bool,
}

/// A fully resolved and validated configuration.
#[derive(Clone, Debug)]
pub struct CliConfig {
    pub command: Command,
    pub dist: Option<DistKind>,
    pub sigma: Option<f64>,
    pub table: Option<PathBuf>,
    pub n: u32,
    pub samples: u64,
    pub seed: Option<u64>,
    pub seed_generated: bool,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub grid: usize,
    pub sigmas: Vec<f64>,
    pub symmetry: bool,
    pub corrupt_m: bool,
}

fn check_sigma(sigma: f64) -> Result<(), CliError> {
    if !(0.0..1.0).contains(&sigma) {
        return Err(CliError::Usage(format!("sigma = {sigma} must lie in [0, 1)")));
    }
    Ok(())
}

impl CliConfig {
    /// Applies flags over file values over defaults and validates the
    /// result. `seed_source` supplies a seed when none is configured.
    pub fn resolve(
        command: Command,
        flags: &CommonArgs,
        extras: Extras,
        seed_source: impl FnOnce() -> u64,
    ) -> Result<CliConfig, CliError> {
        let file = match &flags.config {
            Some(path) => load_config_file(path)?,
            None => FileConfig::default(),
        };
        let mut dist = flags.dist.or(file.dist);
        if command == Command::Sweep {
            dist = Some(dist.unwrap_or(DistKind::Normal));
        }
        let sigma = flags.sigma.or(file.sigma);
        let table = flags.table.clone().or(file.table);
        let configured_seed = flags.seed.or(file.seed);
        let seed_generated = command.uses_randomness() && configured_seed.is_none();
        let seed = if seed_generated { Some(seed_source()) } else { configured_seed };
        let cfg = CliConfig {
            command,
            dist,
            sigma,
            table,
            n: flags.n.or(file.n).unwrap_or(5),
            samples: flags.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
            seed,
            seed_generated,
            workers: flags.workers.or(file.workers).unwrap_or(DEFAULT_WORKERS),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format).unwrap_or_default(),
            grid: extras.grid.or(file.grid).unwrap_or(DEFAULT_GRID),
            sigmas: extras.sigmas.or(file.sigmas).unwrap_or_default(),
            symmetry: extras.symmetry || file.symmetry.unwrap_or(false),
            corrupt_m: extras.corrupt_m,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let usage = |m: &str| Err(CliError::Usage(m.to_string()));
        if !matches!(self.n, 1 | 5) {
            return Err(CliError::Usage(format!("--n must be 1 or 5, got {}", self.n)));
        }
        if self.samples == 0 {
            return usage("--samples must be at least 1");
        }
        if self.workers == 0 {
            return usage("--workers must be at least 1");
        }
        if self.command == Command::Weights && self.grid < 2 {
            return usage("--grid must be at least 2");
        }
        if self.command == Command::Sweep {
            if self.dist != Some(DistKind::Normal) {
                return usage("sweep runs over the normal family; use --dist normal");
            }
            if self.sigmas.is_empty() {
                return usage("sweep needs a non-empty --sigmas list");
            }
            for &s in &self.sigmas {
                check_sigma(s)?;
            }
            if self.sigma.is_some() {
                return usage("sweep takes --sigmas, not --sigma");
            }
            if self.n != 5 {
                return usage("sweep always uses the five-qubit code; drop --n");
            }
            return Ok(());
        }
        if !self.command.needs_distribution() {
            return Ok(());
        }
        match self.dist {
            None => usage("missing --dist (normal, uniform or table)"),
            Some(DistKind::Normal) => match self.sigma {
                None => usage("--dist normal needs --sigma"),
                Some(s) => check_sigma(s),
            },
            Some(DistKind::Uniform) if self.sigma.is_some() => usage("--sigma only applies to --dist normal"),
            Some(DistKind::Table) if self.table.is_none() => usage("--dist table needs --table <path>"),
            Some(_) => Ok(()),
        }
    }

    /// The configured distribution, or the normal one at `sigma` for sweeps.
    pub fn distribution(&self) -> Result<ErrorDistribution, CliError> {
        let bad = |e: qecvar::Error| CliError::Usage(e.to_string());
        match self.dist {
            Some(DistKind::Normal) => ErrorDistribution::normal(self.sigma.unwrap_or(0.0)).map_err(bad),
            Some(DistKind::Uniform) => Ok(ErrorDistribution::uniform()),
            Some(DistKind::Table) => {
                let path = self.table.as_ref().expect("validated");
                ErrorDistribution::from_table_file(path).map_err(bad)
            }
            None => Err(CliError::Usage("no distribution configured".into())),
        }
    }

    pub fn dist_name(&self) -> &'static str {
        match self.dist {
            Some(DistKind::Normal) => "normal",
            Some(DistKind::Uniform) => "uniform",
            Some(DistKind::Table) => "table",
            None => "",
        }
    }
}
