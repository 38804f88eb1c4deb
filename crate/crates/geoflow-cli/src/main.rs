//! `geoflow` command-line front end.

mod args;
mod commands;
mod config;
mod output;
mod validate;

use args::{Cli, Command};
use clap::Parser;
use config::RunConfig;
use std::process::ExitCode;

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid arguments or configuration (exit 2).
    Input(String),
    /// A numerical method failed (exit 3).
    Numerical(String),
    /// A validation suite reported failures (exit 4).
    Validation,
}

impl From<geoflow::Error> for CliError {
    fn from(e: geoflow::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.common)?;
    let (hash, table) = match &cli.command {
        Command::Laws(a) => (cfg.hash("laws", a), commands::laws(&cfg, a)?),
        Command::Flow(a) => (cfg.hash("flow", a), commands::flow(&cfg, a)?),
        Command::Triangulate(a) => (cfg.hash("triangulate", a), commands::triangulate_cmd(&cfg, a)?),
        Command::Metric(a) => (cfg.hash("metric", a), commands::metric(&cfg, a)?),
        Command::Immerse(a) => (cfg.hash("immerse", a), commands::immerse(&cfg, a)?),
        Command::Validate(a) => {
            let summary = validate::run(a.suite);
            let mut bytes = serde_json::to_vec_pretty(&summary).map_err(|e| CliError::Numerical(e.to_string()))?;
            bytes.push(b'\n');
            output::emit(&bytes, cfg.out.as_deref())?;
            return if summary.passed { Ok(()) } else { Err(CliError::Validation) };
        }
    };
    output::emit(&table.render(cfg.format, &hash)?, cfg.out.as_deref())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Validation) => {
            eprintln!("validation failed");
            ExitCode::from(4)
        }
    }
}
