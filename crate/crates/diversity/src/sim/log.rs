//! Match logs: one state row per live agent per tick, plus events,
//! score, and the automaton state registry.

use std::collections::BTreeSet;
use std::io::Write;

use serde::Serialize;

use crate::behavior::{ActionId, StateId};
use crate::society::AgentId;

/// Which side of the match a team plays on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Home,
    Away,
}

impl Side {
    pub fn prefix(self) -> &'static str {
        match self {
            Side::Home => "A",
            Side::Away => "B",
        }
    }
}

/// One snapshot row.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub tick: u64,
    pub agent: AgentId,
    pub state: StateId,
    pub activity: ActionId,
    pub x: f64,
    pub y: f64,
}

/// Notable events of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatchEventKind {
    Goal { side: Side },
    Malfunction { agent: AgentId },
}

/// Goals per side.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Score {
    pub home: u32,
    pub away: u32,
}

impl Score {
    /// Home minus away goals.
    pub fn difference(&self) -> i64 {
        self.home as i64 - self.away as i64
    }
}

/// Complete record of one simulated match.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchLog {
    rows: Vec<LogRow>,
    events: Vec<(u64, MatchEventKind)>,
    score: Score,
    seed: u64,
    ticks: u64,
    states: Vec<StateId>,
}

impl MatchLog {
    pub(crate) fn new(
        rows: Vec<LogRow>,
        events: Vec<(u64, MatchEventKind)>,
        score: Score,
        seed: u64,
        ticks: u64,
        states: Vec<StateId>,
    ) -> Self {
        MatchLog {
            rows,
            events,
            score,
            seed,
            ticks,
            states,
        }
    }

    pub fn rows(&self) -> &[LogRow] {
        &self.rows
    }

    pub fn events(&self) -> &[(u64, MatchEventKind)] {
        &self.events
    }

    pub fn score(&self) -> Score {
        self.score
    }

    pub fn score_difference(&self) -> i64 {
        self.score.difference()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn ticks(&self) -> u64 {
        self.ticks
    }

    /// The automaton state registry, including virtual states.
    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn has_agent(&self, agent: &AgentId) -> bool {
        self.rows.iter().any(|r| &r.agent == agent)
    }

    /// Agents that emitted a row at `tick`, in row order.
    pub fn agents_at(&self, tick: u64) -> Vec<AgentId> {
        self.rows
            .iter()
            .filter(|r| r.tick == tick)
            .map(|r| r.agent.clone())
            .collect()
    }

    /// All agents that ever appear, in first-appearance order.
    pub fn all_agents(&self) -> Vec<AgentId> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for row in &self.rows {
            if seen.insert(row.agent.clone()) {
                out.push(row.agent.clone());
            }
        }
        out
    }

    /// CSV rows `tick,agent_id,state_id,activity_id,x,y`.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "tick,agent_id,state_id,activity_id,x,y")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.tick,
                r.agent,
                r.state,
                r.activity,
                crate::fmt::sig9(r.x),
                crate::fmt::sig9(r.y),
            )?;
        }
        Ok(())
    }

    /// Reconstruct a log from its CSV export, for offline analysis.
    ///
    /// Score, seed, and events are not part of the CSV and come back
    /// empty; the state registry is the set of states actually
    /// observed.
    pub fn from_csv(text: &str) -> crate::Result<Self> {
        use crate::Error;
        let mut lines = text.lines().enumerate();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty match log".into()))?
            .1
            .trim();
        if header != "tick,agent_id,state_id,activity_id,x,y" {
            return Err(Error::Parse(format!(
                "line 1: expected header `tick,agent_id,state_id,activity_id,x,y`, got `{header}`"
            )));
        }
        let mut rows = Vec::new();
        let mut states = BTreeSet::new();
        let mut max_tick = 0u64;
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(Error::Parse(format!(
                    "line {}: expected 6 fields, got {}",
                    idx + 1,
                    fields.len()
                )));
            }
            let bad = |field: &str| {
                Error::Parse(format!("line {}: invalid `{field}` value", idx + 1))
            };
            let tick: u64 = fields[0].parse().map_err(|_| bad("tick"))?;
            let x: f64 = fields[4].parse().map_err(|_| bad("x"))?;
            let y: f64 = fields[5].parse().map_err(|_| bad("y"))?;
            let state = StateId::new(fields[2]);
            states.insert(state.clone());
            max_tick = max_tick.max(tick);
            rows.push(LogRow {
                tick,
                agent: AgentId::new(fields[1]),
                state,
                activity: ActionId::new(fields[3]),
                x,
                y,
            });
        }
        if rows.is_empty() {
            return Err(Error::Parse("match log has no rows".into()));
        }
        Ok(MatchLog {
            rows,
            events: Vec::new(),
            score: Score::default(),
            seed: 0,
            ticks: max_tick + 1,
            states: states.into_iter().collect(),
        })
    }

    /// Sidecar summary (JSON): scores, seed, tick count, events.
    pub fn write_summary(&self, w: impl Write) -> crate::Result<()> {
        #[derive(Serialize)]
        struct Summary<'a> {
            seed: u64,
            ticks: u64,
            score: Score,
            score_difference: i64,
            events: Vec<SummaryEvent<'a>>,
        }
        #[derive(Serialize)]
        struct SummaryEvent<'a> {
            tick: u64,
            #[serde(flatten)]
            kind: &'a MatchEventKind,
        }
        let summary = Summary {
            seed: self.seed,
            ticks: self.ticks,
            score: self.score,
            score_difference: self.score_difference(),
            events: self
                .events
                .iter()
                .map(|(tick, kind)| SummaryEvent { tick: *tick, kind })
                .collect(),
        };
        serde_json::to_writer_pretty(w, &summary)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_log() -> MatchLog {
        let rows = vec![
            LogRow {
                tick: 0,
                agent: AgentId::new("A:p1"),
                state: StateId::new("hold"),
                activity: ActionId::new("hold_position"),
                x: 0.5,
                y: 0.25,
            },
            LogRow {
                tick: 1,
                agent: AgentId::new("A:p1"),
                state: StateId::new("advance"),
                activity: ActionId::new("press_forward"),
                x: 0.5,
                y: 0.25,
            },
        ];
        MatchLog::new(
            rows,
            vec![(1, MatchEventKind::Goal { side: Side::Home })],
            Score { home: 1, away: 0 },
            42,
            2,
            vec![StateId::new("hold"), StateId::new("advance")],
        )
    }

    #[test]
    fn csv_round_trips_the_rows() {
        let log = tiny_log();
        let mut csv = Vec::new();
        log.write_csv(&mut csv).unwrap();
        let reparsed = MatchLog::from_csv(std::str::from_utf8(&csv).unwrap()).unwrap();
        assert_eq!(reparsed.rows(), log.rows());
        assert_eq!(reparsed.ticks(), log.ticks());
        // Score/seed/events are not part of the CSV.
        assert_eq!(reparsed.score(), Score::default());
    }

    #[test]
    fn from_csv_diagnoses_bad_input() {
        assert!(MatchLog::from_csv("").is_err());
        assert!(MatchLog::from_csv("wrong,header\n").is_err());
        let bad_tick = "tick,agent_id,state_id,activity_id,x,y\nx,a,s,act,0,0\n";
        let err = MatchLog::from_csv(bad_tick).unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn summary_reports_score_and_events() {
        let mut out = Vec::new();
        tiny_log().write_summary(&mut out).unwrap();
        let value: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(value["score_difference"], 1);
        assert_eq!(value["events"][0]["tick"], 1);
        assert_eq!(value["events"][0]["kind"], "goal");
    }
}
