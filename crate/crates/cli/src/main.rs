//! `lerch-afe`: evaluate, scan, calibrate and run mean-square experiments
//! from the command line.
//!
//! Exit codes: 0 on success, 2 on usage or domain errors, 3 when `--strict`
//! is set and some point was flagged unreliable.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lerch_afe::ZetaError;
use thiserror::Error;

use crate::commands::{AfeScanArgs, CalibrateArgs, EvalArgs, FeCheckArgs, MeanSquareArgs};
use crate::output::{Format, Sink};

#[derive(Debug, Parser)]
#[command(name = "lerch-afe", version, about = "Hurwitz and Lerch zeta-functions via approximate functional equations")]
struct Cli {
    /// Cap the worker pool at N threads.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Omit the timestamp comment line (CSV) or `meta` field (JSON).
    #[arg(long, global = true)]
    no_meta: bool,

    /// Exit with status 3 if any point is flagged unreliable.
    #[arg(long, global = true)]
    strict: bool,

    /// Write data to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate ζ_L(s, α, λ) at one point.
    Eval(EvalArgs),
    /// Compare the AFE with the oracle on a grid.
    Afescan(AfeScanArgs),
    /// Check the functional equations on a grid.
    Fecheck(FeCheckArgs),
    /// Fit the AFE envelope constants and write a calibration file.
    Calibrate(CalibrateArgs),
    /// Mean square of ζ_L on the critical line over a geometric ladder of T.
    Meansquare(MeanSquareArgs),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Zeta(#[from] ZetaError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(String),
    #[error("{0}")]
    Strict(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Strict(_) => 3,
            _ => 2,
        }
    }
}

/// Outcome of a subcommand that finished its output.
pub enum Status {
    Clean,
    Unreliable(usize),
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        lerch_afe::par::configure_threads(n)?;
    }
    let sink = Sink {
        format: cli.format,
        meta: !cli.no_meta,
        out: cli.out,
    };
    let status = match cli.command {
        Command::Eval(a) => commands::eval(&a, &sink)?,
        Command::Afescan(a) => commands::afescan(&a, &sink)?,
        Command::Fecheck(a) => commands::fecheck(&a, &sink)?,
        Command::Calibrate(a) => commands::calibrate(&a, &sink)?,
        Command::Meansquare(a) => commands::meansquare(&a, &sink)?,
    };
    match status {
        Status::Unreliable(n) if cli.strict => Err(CliError::Strict(format!("{n} point(s) flagged unreliable"))),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
