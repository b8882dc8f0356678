//! `diversity replay` — re-execute a recorded run from its manifest.
//! Runs are deterministic, so a replay reproduces the data files byte
//! for byte (the fresh manifest carries a new timestamp).

use std::path::PathBuf;

use clap::Args;

use crate::manifest::RunManifest;
use crate::output::resolve_out_dir;
use crate::{CliError, CliResult, OutputArgs};

use super::{behavior, dynamics, entropy, experiment, run_match};

#[derive(Args)]
pub struct ReplayArgs {
    /// Manifest of the run to reproduce.
    manifest: PathBuf,

    #[command(flatten)]
    out: OutputArgs,
}

pub fn run(args: &ReplayArgs) -> CliResult<()> {
    let manifest = RunManifest::read(&args.manifest)?;
    let dir = resolve_out_dir(&args.out, &format!("replay-{}", manifest.command))?;

    let parse = |what: &str, e: serde_json::Error| {
        CliError::input(format!("manifest args do not parse as {what}: {e}"))
    };
    match manifest.command.as_str() {
        "entropy" => {
            let spec: entropy::EntropySpec = serde_json::from_value(manifest.args)
                .map_err(|e| parse("entropy", e))?;
            entropy::execute(&spec, &dir)
        }
        "behavior" => {
            let spec: behavior::BehaviorSpec = serde_json::from_value(manifest.args)
                .map_err(|e| parse("behavior", e))?;
            behavior::execute(&spec, &dir)
        }
        "dynamics" => {
            let spec: dynamics::DynamicsSpec = serde_json::from_value(manifest.args)
                .map_err(|e| parse("dynamics", e))?;
            dynamics::execute(&spec, &dir)
        }
        "experiment" => {
            let spec: experiment::ExperimentSpec = serde_json::from_value(manifest.args)
                .map_err(|e| parse("experiment", e))?;
            experiment::execute(&spec, &dir)
        }
        "match" => {
            let spec: run_match::MatchSpec = serde_json::from_value(manifest.args)
                .map_err(|e| parse("match", e))?;
            run_match::execute(&spec, &dir)
        }
        other => Err(CliError::input(format!(
            "manifest command `{other}` is not replayable"
        ))),
    }
}
