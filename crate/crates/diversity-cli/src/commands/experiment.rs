//! `diversity experiment` — challengers vs a control team.

use std::path::Path;

use clap::Args;
use serde::{Deserialize, Serialize};

use diversity::fmt::sig9;
use diversity::sim::{builtin_team, experiment_suite_with_ticks, TeamConfig, DEFAULT_MATCH_TICKS};

use crate::manifest::RunManifest;
use crate::output::{resolve_out_dir, write_file, write_json};
use crate::{CliError, CliResult, OutputArgs};

#[derive(Args)]
pub struct ExperimentArgs {
    /// Control team: a built-in name or a team JSON path.
    #[arg(long, default_value = "Control")]
    control: String,

    /// Challenger teams (names or paths), comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "Kids0,Agr,Kids2,Kids1,Kids3,Control"
    )]
    challengers: Vec<String>,

    /// Games per challenger-control pair.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    games: u32,

    /// Base seed for the game streams.
    #[arg(long, default_value_t = 1999)]
    seed: u64,

    /// Ticks per game.
    #[arg(long, default_value_t = DEFAULT_MATCH_TICKS)]
    ticks: u64,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub control: String,
    pub challengers: Vec<String>,
    pub games: u32,
    pub seed: u64,
    pub ticks: u64,
}

/// Resolve a team reference: a built-in team name or a config file.
pub(crate) fn resolve_team(reference: &str) -> CliResult<TeamConfig> {
    if let Ok(team) = builtin_team(reference) {
        return Ok(team);
    }
    let path = Path::new(reference);
    if path.exists() {
        return Ok(TeamConfig::from_json_file(path)?);
    }
    Err(CliError::input(format!(
        "unknown team `{reference}` (not a built-in, not a file)"
    )))
}

pub fn run(args: &ExperimentArgs) -> CliResult<()> {
    let spec = ExperimentSpec {
        control: args.control.clone(),
        challengers: args.challengers.clone(),
        games: args.games,
        seed: args.seed,
        ticks: args.ticks,
    };
    let dir = resolve_out_dir(&args.out, "experiment")?;
    execute(&spec, &dir)
}

pub fn execute(spec: &ExperimentSpec, dir: &Path) -> CliResult<()> {
    if spec.games == 0 {
        return Err(CliError::input("--games must be >= 1"));
    }
    let control = resolve_team(&spec.control)?;
    let challengers: Vec<TeamConfig> = spec
        .challengers
        .iter()
        .map(|r| resolve_team(r))
        .collect::<CliResult<_>>()?;

    let report =
        experiment_suite_with_ticks(&control, &challengers, spec.games, spec.seed, spec.ticks)?;

    let mut csv = Vec::new();
    report
        .write_csv(&mut csv)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    write_file(dir, "report.csv", &csv)?;
    write_json(dir, "report.json", &report)?;

    println!(
        "control {} | {} games per challenger, seed {}",
        report.control, report.games_per_pair, report.seed
    );
    for row in &report.rows {
        println!(
            "  {:<8} positioning {} offensiveness {} score diff {:+}",
            row.team,
            sig9(row.entropy_positioning),
            sig9(row.entropy_offensiveness),
            row.score_difference
        );
    }

    RunManifest::new(
        "experiment",
        spec,
        spec.challengers.clone(),
        Some(spec.seed),
        vec!["report.csv".into(), "report.json".into()],
    )?
    .write(dir)?;
    Ok(())
}
