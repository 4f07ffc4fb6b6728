//! Command-line experiments with CSV outputs and exit codes `0` (pass), `1` (quantitative failure)
//! and `2` (input or precondition error).

mod args;
mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{CommandFactory, FromArgMatches};

pub use args::{Cli, Command};
pub use config::{expand_config, parse_config};

use crate::parallel::{init_global_pool, threads_from_env};

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

/// Errors that stop a command before a verdict; all map to exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Precondition(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Precondition(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<crate::LabError> for CliError {
    fn from(e: crate::LabError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Precondition(format!("i/o: {e}"))
    }
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Parse arguments after merging any `--config` file; flags given on the command line win.
pub fn parse(args: Vec<OsString>) -> Result<Cli, clap::Error> {
    let mut cmd = Cli::command().mut_subcommands(|s| s.args_override_self(true));
    let merged = match expand_config(args) {
        Ok(a) => a,
        Err(msg) => return Err(cmd.error(clap::error::ErrorKind::ValueValidation, msg)),
    };
    let matches = cmd.try_get_matches_from_mut(merged)?;
    Cli::from_arg_matches(&matches)
}

/// Run the command line and return the process exit code.
pub fn run(args: Vec<OsString>) -> i32 {
    let cli = match parse(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match threads_from_env() {
        Ok(t) => init_global_pool(t),
        Err(msg) => {
            eprintln!("usage error: {msg}");
            return EXIT_ERROR;
        }
    }
    match commands::execute(&cli.command) {
        Ok(Outcome::Pass) => EXIT_PASS,
        Ok(Outcome::Fail) => EXIT_FAIL,
        Err(e) => {
            eprintln!("{e}");
            EXIT_ERROR
        }
    }
}

/// Output directory, created on demand.
fn prepare_out(dir: &PathBuf) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Precondition(format!("cannot create {}: {e}", dir.display())))
}
