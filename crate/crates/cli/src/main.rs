//! `goldbach`: batch front end over goldbach-core.
//!
//! Exit status is 0 on success, 1 on invalid input (bad flags, out-of-range
//! or out-of-domain values, unreadable cache contents) and 2 on resource,
//! precision or I/O failures and failed verifications.

mod args;
mod commands;
mod store;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use goldbach_core::Error;

use args::{Cli, Command};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Verification(_) => 2,
            Failure::Core(e) => match e {
                Error::InvalidArgument(_)
                | Error::OutOfRange { .. }
                | Error::Domain(_)
                | Error::CorruptCache(_) => 1,
                _ => 2,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "usage: {msg}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Verification(checks) => write!(f, "verification failed: {checks}"),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Count(a) => commands::count(a),
        Command::Verify(a) => commands::verify(a),
        Command::Sample(a) => commands::sample(a),
        Command::Partitions(a) => commands::partitions(a),
        Command::Moments(a) => commands::moments(a),
        Command::Cdf(a) => commands::cdf(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Series(a) => commands::series(a),
        Command::Tauberian(a) => commands::tauberian(a),
        Command::Twostep(a) => commands::twostep(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("goldbach: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
