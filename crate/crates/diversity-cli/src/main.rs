//! `diversity` — command-line front end for the diversity toolkit.
//!
//! Subcommands load societies, policy tables, dynamics scenarios, or
//! team configs; compute the requested metrics or runs; print the key
//! values; and write a JSON/CSV report plus a run manifest into the
//! output directory. Exit codes: 0 success, 2 input or usage error,
//! 1 internal error.

mod commands;
mod manifest;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Input/usage errors exit 2; anything else exits 1.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

impl From<diversity::Error> for CliError {
    fn from(err: diversity::Error) -> Self {
        match err {
            diversity::Error::Io(e) => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Internal(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "diversity",
    version,
    about = "Diversity metrics, vibration dynamics, and team-simulation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a diversity metric of a society file.
    Entropy(commands::entropy::EntropyArgs),
    /// Pairwise behavioral difference of policy tables or a match log.
    Behavior(commands::behavior::BehaviorArgs),
    /// Solve a dynamics scenario and export the trajectory.
    Dynamics(commands::dynamics::DynamicsArgs),
    /// Run challengers against a control team and tabulate the results.
    Experiment(commands::experiment::ExperimentArgs),
    /// Run one seeded match and export its log.
    Match(commands::run_match::MatchArgs),
    /// List the built-in teams or dump them as JSON fixtures.
    Teams(commands::teams::TeamsArgs),
    /// Re-execute a recorded run from its manifest.
    Replay(commands::replay::ReplayArgs),
}

/// Options shared by every run-producing subcommand.
#[derive(Args, Clone)]
pub struct OutputArgs {
    /// Output directory for the report files and the run manifest
    /// [default: $DIVERSITY_OUT_DIR/<command>-<timestamp> or
    /// ./runs/<command>-<timestamp>]
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Entropy(args) => commands::entropy::run(&args),
        Command::Behavior(args) => commands::behavior::run(&args),
        Command::Dynamics(args) => commands::dynamics::run(&args),
        Command::Experiment(args) => commands::experiment::run(&args),
        Command::Match(args) => commands::run_match::run(&args),
        Command::Teams(args) => commands::teams::run(&args),
        Command::Replay(args) => commands::replay::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
