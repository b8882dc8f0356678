//! Challenger-vs-control experiment harness: per challenger, the
//! positional and trait entropies plus the cumulative score
//! difference over a fixed number of seeded games.

use std::io::Write;

use serde::Serialize;

use crate::{Error, Result};

use super::config::{positional_entropy, trait_entropy, TeamConfig};
use super::engine::{run_match, DEFAULT_MATCH_TICKS};
use super::rng::Xorshift64Star;

/// One challenger's line of the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub team: String,
    pub entropy_positioning: f64,
    pub entropy_offensiveness: f64,
    pub score_difference: i64,
    pub games: u32,
}

/// The full experiment report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub control: String,
    pub games_per_pair: u32,
    pub seed: u64,
    pub ticks: u64,
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentReport {
    /// CSV with one row per challenger:
    /// `team,entropy_positioning,entropy_offensiveness,score_difference,games`.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(
            w,
            "team,entropy_positioning,entropy_offensiveness,score_difference,games"
        )?;
        for row in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{}",
                row.team,
                crate::fmt::sig9(row.entropy_positioning),
                crate::fmt::sig9(row.entropy_offensiveness),
                row.score_difference,
                row.games,
            )?;
        }
        Ok(())
    }
}

/// Play every challenger against the control team for
/// `games_per_pair` seeded games of [`DEFAULT_MATCH_TICKS`] ticks and
/// tabulate entropies and cumulative score differences. Game seeds
/// derive deterministically from `(seed, challenger index, game
/// index)`, so the report reproduces bit for bit.
pub fn experiment_suite(
    control: &TeamConfig,
    challengers: &[TeamConfig],
    games_per_pair: u32,
    seed: u64,
) -> Result<ExperimentReport> {
    experiment_suite_with_ticks(control, challengers, games_per_pair, seed, DEFAULT_MATCH_TICKS)
}

pub fn experiment_suite_with_ticks(
    control: &TeamConfig,
    challengers: &[TeamConfig],
    games_per_pair: u32,
    seed: u64,
    ticks: u64,
) -> Result<ExperimentReport> {
    if games_per_pair == 0 {
        return Err(Error::InvalidSimRequest("games_per_pair must be >= 1".into()));
    }
    if challengers.is_empty() {
        return Err(Error::InvalidSimRequest("no challengers given".into()));
    }
    let mut rows = Vec::with_capacity(challengers.len());
    for (ci, challenger) in challengers.iter().enumerate() {
        let mut diff = 0i64;
        for game in 0..games_per_pair {
            let game_seed =
                Xorshift64Star::derive(seed, ((ci as u64) << 32) | game as u64);
            let log = run_match(challenger, control, game_seed, ticks)?;
            diff += log.score_difference();
        }
        rows.push(ExperimentRow {
            team: challenger.name().to_owned(),
            entropy_positioning: positional_entropy(challenger).bits(),
            entropy_offensiveness: trait_entropy(challenger).bits(),
            score_difference: diff,
            games: games_per_pair,
        });
    }
    Ok(ExperimentReport {
        control: control.name().to_owned(),
        games_per_pair,
        seed,
        ticks,
        rows: rows.to_vec(),
    })
}
