//! `diversity match` — run one seeded match and export its log.

use std::path::Path;

use clap::Args;
use serde::{Deserialize, Serialize};

use diversity::sim::{run_match, DEFAULT_MATCH_TICKS};

use crate::manifest::RunManifest;
use crate::output::{resolve_out_dir, write_file};
use crate::{CliError, CliResult, OutputArgs};

#[derive(Args)]
pub struct MatchArgs {
    /// Home team (built-in name or team JSON path).
    home: String,

    /// Away team (built-in name or team JSON path).
    away: String,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = DEFAULT_MATCH_TICKS)]
    ticks: u64,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize, Deserialize)]
pub struct MatchSpec {
    pub home: String,
    pub away: String,
    pub seed: u64,
    pub ticks: u64,
}

pub fn run(args: &MatchArgs) -> CliResult<()> {
    let spec = MatchSpec {
        home: args.home.clone(),
        away: args.away.clone(),
        seed: args.seed,
        ticks: args.ticks,
    };
    let dir = resolve_out_dir(&args.out, "match")?;
    execute(&spec, &dir)
}

pub fn execute(spec: &MatchSpec, dir: &Path) -> CliResult<()> {
    let home = super::experiment::resolve_team(&spec.home)?;
    let away = super::experiment::resolve_team(&spec.away)?;
    let log = run_match(&home, &away, spec.seed, spec.ticks)?;

    let mut csv = Vec::new();
    log.write_csv(&mut csv)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    write_file(dir, "match.csv", &csv)?;
    let mut summary = Vec::new();
    log.write_summary(&mut summary)?;
    write_file(dir, "summary.json", &summary)?;

    let score = log.score();
    println!(
        "{} {} - {} {} (seed {}, {} ticks)",
        home.name(),
        score.home,
        score.away,
        away.name(),
        spec.seed,
        spec.ticks
    );

    RunManifest::new(
        "match",
        spec,
        vec![spec.home.clone(), spec.away.clone()],
        Some(spec.seed),
        vec!["match.csv".into(), "summary.json".into()],
    )?
    .write(dir)?;
    Ok(())
}
