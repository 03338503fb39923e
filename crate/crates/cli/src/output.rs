//! Flat records written as CSV or JSON lines. Every record repeats the run
//! configuration so that any single file is enough to reproduce it.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;

use crate::config::{CliConfig, Format};
use crate::CliError;

/// One named value with the configuration that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub command: &'static str,
    pub dist: &'static str,
    pub sigma: Option<f64>,
    pub table: Option<String>,
    pub n: u32,
    pub samples: u64,
    pub seed: Option<u64>,
    pub workers: usize,
    pub name: String,
    pub value: f64,
    pub std_error: Option<f64>,
    pub passed: Option<bool>,
}

impl Row {
    pub fn new(cfg: &CliConfig, command: &'static str, name: impl Into<String>, value: f64) -> Row {
        Row {
            command,
            dist: cfg.dist_name(),
            sigma: cfg.sigma,
            table: cfg.table.as_ref().map(|p| p.display().to_string()),
            n: cfg.n,
            samples: cfg.samples,
            seed: cfg.seed,
            workers: cfg.workers,
            name: name.into(),
            value,
            std_error: None,
            passed: None,
        }
    }

    pub fn with_error(mut self, std_error: f64) -> Row {
        self.std_error = Some(std_error);
        self
    }

    pub fn with_passed(mut self, passed: bool) -> Row {
        self.passed = Some(passed);
        self
    }
}

fn sink(cfg: &CliConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Writes `rows` to the configured output in the configured format.
pub fn write_rows<T: Serialize>(cfg: &CliConfig, rows: &[T]) -> Result<(), CliError> {
    let path_err = |e: io::Error| match &cfg.out {
        Some(p) => CliError::io(p, e),
        None => CliError::io("<stdout>", e),
    };
    let mut out = sink(cfg)?;
    match cfg.format {
        Format::Json => {
            for r in rows {
                serde_json::to_writer(&mut out, r).map_err(|e| path_err(e.into()))?;
                out.write_all(b"\n").map_err(path_err)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for r in rows {
                w.serialize(r).map_err(|e| path_err(e.into()))?;
            }
            w.flush().map_err(path_err)?;
        }
    }
    out.flush().map_err(path_err)
}
