//! Command-line front end: density sweeps, exponent fits, condition checks,
//! product and ODE diagnostics, CSV tables and SVG figures.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub use args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

/// What a command reports back to the process: `ok = false` fails the run under `--strict`.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub ok: bool,
    pub summary: Vec<String>,
}

/// Parse arguments (merging any `--config` file) and run the selected command.
/// CSV goes to `--out` or `stdout`; the summary goes to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = config::merge_config(argv)?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    write!(stdout, "{e}").map_err(|s| CliError::io("<stdout>", s))?;
                    Ok(0)
                }
                _ => Err(CliError::Usage(e.to_string().trim_end().to_string())),
            };
        }
    };
    let strict = cli.common.strict;
    let outcome = commands::dispatch(&cli, stdout)?;
    for line in &outcome.summary {
        writeln!(stderr, "{line}").map_err(|s| CliError::io("<stderr>", s))?;
    }
    Ok(if strict && !outcome.ok { 1 } else { 0 })
}
