//! Command-line front end: `simulate`, `run`, `enumerate` and `compare`.
//!
//! Exit codes: 0 success, 1 a `compare` threshold was exceeded, 2 usage
//! error, 3 runtime or data error.

mod args;
mod commands;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

pub use args::{Cli, Command, RunConfigFile};
pub use commands::{resolve_experiment, DataSource, ExperimentSpec};

use crate::error::BmaError;

pub const EXIT_THRESHOLD: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ThresholdExceeded,
}

pub fn exit_code(err: &BmaError) -> u8 {
    match err {
        BmaError::InvalidConfig(_)
        | BmaError::TooFewColumns(_)
        | BmaError::TooManyVariables { .. }
        | BmaError::UnknownBaseline(_) => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

pub fn run_command(command: Command) -> Result<Outcome, BmaError> {
    match command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Run(a) => commands::run(a),
        Command::Enumerate(a) => commands::enumerate(a),
        Command::Compare(a) => commands::compare(a),
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run_command(cli.command) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ThresholdExceeded) => ExitCode::from(EXIT_THRESHOLD),
        Err(err) => {
            eprintln!("error: {err}");
            if exit_code(&err) == EXIT_USAGE {
                eprintln!("\nFor more information, try '--help'.");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
