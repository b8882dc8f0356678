//! Deterministic situated-automaton team simulator.
//!
//! Teams of role/trait-configured players ([`TeamConfig`]) run a
//! zone-influence possession model ([`run_match`]) under a shared
//! situated automaton ([`AutomatonSpec`]): mandatory reactive
//! transitions supersede utility-ranked deliberative choices. Runs
//! are seeded with an explicit xorshift generator ([`Xorshift64Star`])
//! and log one state row per live agent per tick ([`MatchLog`]), so
//! identical inputs produce byte-identical logs. [`experiment_suite`]
//! wires the pieces into a challenger-vs-control score/entropy report.

mod automaton;
mod config;
mod engine;
mod experiment;
mod log;
mod rng;

pub use automaton::{
    automaton_step, default_automaton, AutomatonSpec, Candidate, EventId, StateDef, StepOutcome,
    EVENT_GOAL,
};
pub use config::{
    builtin_team, builtin_teams, positional_entropy, trait_entropy, PlayerConfig, Role, RoleName,
    TeamConfig, TraitProfile,
};
pub use engine::{
    diversity_timeseries, diversity_timeseries_filtered, inject_malfunction, match_agent_id,
    run_match, run_match_mirror, run_match_with, DiversityMetric, MalfunctionPlan, MatchOptions,
    DEFAULT_MATCH_TICKS,
};
pub use experiment::{
    experiment_suite, experiment_suite_with_ticks, ExperimentReport, ExperimentRow,
};
pub use log::{LogRow, MatchEventKind, MatchLog, Score, Side};
pub use rng::Xorshift64Star;
