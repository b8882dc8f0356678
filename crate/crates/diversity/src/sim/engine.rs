//! The match engine: a zone-influence possession model driving the
//! situated automata.
//!
//! The model is openly synthetic — it exists to exercise the metrics
//! pipeline, not to emulate a soccer server. Mechanics, per tick:
//!
//! 1. Every live player stands at its *effective position*: the home
//!    position shifted toward the opponent goal in proportion to its
//!    offensiveness.
//! 2. Each team's *zone influence* at the ball is the sum over its
//!    live players of the kernel `1 / (ε + distance²)`.
//! 3. One uniform draw decides possession in proportion to influence;
//!    the controlling team pushes the ball one step toward the
//!    opposing goal. The ball lives on an integer step line, so a
//!    side-swapped run with the inverted uniform stream is an *exact*
//!    mirror — scores obey `diff(a, b) = −diff(b, a)` bit for bit.
//! 4. Crossing a goal line scores, fires the mandatory goal event
//!    (reactive regroup), and resets the ball to the center.
//! 5. Every live agent runs one automaton cycle with deterministic,
//!    role/trait-driven utilities and logs one row.
//!
//! All geometry is evaluated in each team's own attacking frame (own
//! goal at x = 0), which keeps the computation identical for both
//! sides and makes the mirror exact in floating point.


use crate::behavior::{behavioral_features, StateId};
use crate::entropy::{shannon_entropy, EntropyValue};
use crate::society::{Agent, AgentId, Distribution, Society};
use crate::taxonomy::{distance_matrix, hierarchic_entropy};
use crate::{Error, Result};

use super::automaton::{automaton_step, default_automaton, states, AutomatonSpec, EventId, EVENT_GOAL};
use super::config::{RoleName, TeamConfig};
use super::log::{LogRow, MatchEventKind, MatchLog, Score, Side};
use super::rng::Xorshift64Star;

/// Ball steps from the center line to a goal line.
const GOAL_STEPS: i64 = 25;
/// Field distance of one ball step (the goal lines sit at x = 0, 1).
const BALL_STEP: f64 = 0.5 / GOAL_STEPS as f64;
/// Fraction of the home-to-goal distance a fully offensive player
/// shifts forward.
const OFFENSE_SHIFT: f64 = 0.3;
/// Softening constant of the influence kernel `1 / (ε + d²)`.
const KERNEL_EPS: f64 = 0.05;
/// Ticks a substitute needs to finish its compensating slide.
const COMPENSATION_TICKS: u64 = 400;
/// Fraction of the way toward the dead agent's home the substitute
/// finally moves (partial compensation).
const COMPENSATION_FRACTION: f64 = 0.5;
/// Default match length used by the experiment harness.
pub const DEFAULT_MATCH_TICKS: u64 = 3000;

/// Match-scoped agent id: the side prefix keeps the two rosters
/// distinct even when a team plays itself.
pub fn match_agent_id(side: Side, player: &AgentId) -> AgentId {
    AgentId::new(format!("{}:{}", side.prefix(), player))
}

/// A scripted mid-run malfunction: `agent` emits no rows after
/// `tick`; an optional same-side `substitute` then slides its home
/// position partway toward the dead agent's over the following
/// `COMPENSATION_TICKS`.
#[derive(Debug, Clone, PartialEq)]
pub struct MalfunctionPlan {
    pub tick: u64,
    pub agent: AgentId,
    pub substitute: Option<AgentId>,
}

/// Optional run modifiers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MatchOptions {
    pub malfunction: Option<MalfunctionPlan>,
    /// Run the exact mirror image: sides swapped by the caller and the
    /// uniform stream inverted, so paired scores cancel exactly.
    pub mirror: bool,
}

struct SimPlayer {
    id: AgentId,
    side: Side,
    is_goalie: bool,
    offensiveness: f64,
    own_home: (f64, f64),
    shift_target: Option<(f64, f64)>,
    state: StateId,
    alive: bool,
}

impl SimPlayer {
    /// Home position at `tick`, including any compensation slide.
    fn home_at(&self, tick: u64, malfunction_tick: Option<u64>) -> (f64, f64) {
        match (self.shift_target, malfunction_tick) {
            (Some(target), Some(t0)) if tick > t0 => {
                let progress =
                    ((tick - t0) as f64 / COMPENSATION_TICKS as f64).min(1.0);
                (
                    self.own_home.0 + progress * (target.0 - self.own_home.0),
                    self.own_home.1 + progress * (target.1 - self.own_home.1),
                )
            }
            _ => self.own_home,
        }
    }

    /// Effective position in the team's own attacking frame.
    fn effective(&self, tick: u64, malfunction_tick: Option<u64>) -> (f64, f64) {
        let home = self.home_at(tick, malfunction_tick);
        const GOAL: (f64, f64) = (1.0, 0.5);
        (
            home.0 + OFFENSE_SHIFT * self.offensiveness * (GOAL.0 - home.0),
            home.1 + OFFENSE_SHIFT * self.offensiveness * (GOAL.1 - home.1),
        )
    }

    /// Logged field position (global frame: away positions mirrored).
    fn global(&self, frame_pos: (f64, f64)) -> (f64, f64) {
        match self.side {
            Side::Home => frame_pos,
            Side::Away => (1.0 - frame_pos.0, frame_pos.1),
        }
    }
}

fn build_side(team: &TeamConfig, side: Side) -> Vec<SimPlayer> {
    team.players()
        .iter()
        .map(|p| SimPlayer {
            id: match_agent_id(side, &p.id),
            side,
            is_goalie: p.role.name == RoleName::Goalie,
            offensiveness: p.traits.offensiveness,
            own_home: p.role.home,
            shift_target: None,
            state: StateId::new(if p.role.name == RoleName::Goalie {
                states::GUARD
            } else {
                states::HOLD
            }),
            alive: true,
        })
        .collect()
}

fn dist2(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    dx * dx + dy * dy
}

/// Sum of kernel influences of the live players at the ball, all in
/// the team's own frame.
fn influence(players: &[SimPlayer], positions: &[(f64, f64)], ball: (f64, f64)) -> f64 {
    players
        .iter()
        .zip(positions)
        .filter(|(p, _)| p.alive)
        .map(|(_, pos)| 1.0 / (KERNEL_EPS + dist2(*pos, ball)))
        .sum()
}

/// Index of the live player closest to the ball; ties go to the
/// lowest roster index.
fn nearest_live(players: &[SimPlayer], positions: &[(f64, f64)], ball: (f64, f64)) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, (p, pos)) in players.iter().zip(positions).enumerate() {
        if !p.alive {
            continue;
        }
        let d = dist2(*pos, ball);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

/// Candidate utilities for the default automaton, in candidate order
/// (guard, hold, advance, retreat, kick). Deterministic in the
/// player's role/trait and the frame-local game situation.
fn utilities(
    player: &SimPlayer,
    ball_frame_x: f64,
    controls: bool,
    is_nearest: bool,
) -> [f64; 5] {
    let off = player.offensiveness;
    let guard = if player.is_goalie {
        2.0 + if ball_frame_x < 0.33 { 1.0 } else { 0.0 }
    } else {
        0.0
    };
    let hold = 1.0;
    let advance = if player.is_goalie {
        -1.0
    } else {
        0.4 + 1.2 * off + if controls { 0.4 } else { -0.2 }
    };
    let retreat = if player.is_goalie {
        -1.0
    } else {
        0.4 + 1.2 * (1.0 - off) + if !controls && ball_frame_x < 0.5 { 0.4 } else { -0.2 }
    };
    let kick = if controls && is_nearest { 3.0 } else { -1.0 };
    [guard, hold, advance, retreat, kick]
}

/// Run a match with default options.
pub fn run_match(home: &TeamConfig, away: &TeamConfig, seed: u64, ticks: u64) -> Result<MatchLog> {
    run_match_with(home, away, seed, ticks, &MatchOptions::default())
}

/// Run the exact mirror image of `run_match(away, home, seed, ticks)`
/// with the sides swapped as given: the score difference negates
/// exactly.
pub fn run_match_mirror(
    home: &TeamConfig,
    away: &TeamConfig,
    seed: u64,
    ticks: u64,
) -> Result<MatchLog> {
    run_match_with(
        home,
        away,
        seed,
        ticks,
        &MatchOptions {
            mirror: true,
            ..MatchOptions::default()
        },
    )
}

/// Re-run a match with a malfunction injected at `plan.tick`.
/// Determinism makes this equivalent to modifying the run in flight:
/// everything before the event tick is identical to the unmodified
/// match.
pub fn inject_malfunction(
    home: &TeamConfig,
    away: &TeamConfig,
    seed: u64,
    ticks: u64,
    plan: MalfunctionPlan,
) -> Result<MatchLog> {
    run_match_with(
        home,
        away,
        seed,
        ticks,
        &MatchOptions {
            malfunction: Some(plan),
            mirror: false,
        },
    )
}

pub fn run_match_with(
    home: &TeamConfig,
    away: &TeamConfig,
    seed: u64,
    ticks: u64,
    options: &MatchOptions,
) -> Result<MatchLog> {
    if ticks == 0 {
        return Err(Error::InvalidSimRequest("ticks must be >= 1".into()));
    }
    let spec: AutomatonSpec = default_automaton();
    let mut sides = [build_side(home, Side::Home), build_side(away, Side::Away)];

    // Resolve and validate the malfunction plan.
    let malfunction = match &options.malfunction {
        None => None,
        Some(plan) => {
            if plan.tick >= ticks {
                return Err(Error::InvalidSimRequest(format!(
                    "malfunction tick {} outside the run of {ticks} ticks",
                    plan.tick
                )));
            }
            let locate = |id: &AgentId| -> Option<(usize, usize)> {
                for (s, side) in sides.iter().enumerate() {
                    if let Some(i) = side.iter().position(|p| &p.id == id) {
                        return Some((s, i));
                    }
                }
                None
            };
            let dead = locate(&plan.agent)
                .ok_or_else(|| Error::UnknownAgent(plan.agent.to_string()))?;
            let substitute = match &plan.substitute {
                None => None,
                Some(id) => {
                    let sub = locate(id).ok_or_else(|| Error::UnknownAgent(id.to_string()))?;
                    if sub.0 != dead.0 {
                        return Err(Error::InvalidSimRequest(format!(
                            "substitute `{id}` is not on the dead agent's side"
                        )));
                    }
                    if sub == dead {
                        return Err(Error::InvalidSimRequest(
                            "an agent cannot substitute for itself".into(),
                        ));
                    }
                    Some(sub)
                }
            };
            if let Some((s, i)) = substitute {
                let dead_home = sides[dead.0][dead.1].own_home;
                let sub_home = sides[s][i].own_home;
                sides[s][i].shift_target = Some((
                    sub_home.0 + COMPENSATION_FRACTION * (dead_home.0 - sub_home.0),
                    sub_home.1 + COMPENSATION_FRACTION * (dead_home.1 - sub_home.1),
                ));
            }
            Some((plan.tick, dead))
        }
    };
    let malfunction_tick = malfunction.map(|(t, _)| t);

    let mut rng = Xorshift64Star::new(seed);
    let mut rows = Vec::with_capacity(ticks as usize * (sides[0].len() + sides[1].len()));
    let mut events = Vec::new();
    let mut score = Score::default();
    // Ball progress along the home team's attacking direction, in
    // integer steps from the center.
    let mut ball: i64 = 0;

    for tick in 0..ticks {
        // The dead agent stops emitting rows strictly after the event.
        if let Some((t0, (s, i))) = malfunction {
            if tick == t0 + 1 {
                sides[s][i].alive = false;
            }
            if tick == t0 {
                events.push((
                    tick,
                    MatchEventKind::Malfunction {
                        agent: sides[s][i].id.clone(),
                    },
                ));
            }
        }

        // Frame-local effective positions and ball coordinates.
        let frame_positions: [Vec<(f64, f64)>; 2] = [
            sides[0]
                .iter()
                .map(|p| p.effective(tick, malfunction_tick))
                .collect(),
            sides[1]
                .iter()
                .map(|p| p.effective(tick, malfunction_tick))
                .collect(),
        ];
        let ball_frame = |side: Side, ball: i64| -> (f64, f64) {
            let progress = match side {
                Side::Home => ball,
                Side::Away => -ball,
            };
            (0.5 + progress as f64 * BALL_STEP, 0.5)
        };

        let i_home = influence(&sides[0], &frame_positions[0], ball_frame(Side::Home, ball));
        let i_away = influence(&sides[1], &frame_positions[1], ball_frame(Side::Away, ball));
        let total = i_home + i_away;

        // Possession: one uniform per tick. The mirrored run uses the
        // complementary comparison so the decision sequence is the
        // exact side swap.
        let raw = rng.uniform();
        let home_controls = if options.mirror {
            raw * total >= i_away
        } else {
            raw * total < i_home
        };

        ball += if home_controls { 1 } else { -1 };
        let mut goal_event = false;
        if ball >= GOAL_STEPS {
            score.home += 1;
            events.push((tick, MatchEventKind::Goal { side: Side::Home }));
            ball = 0;
            goal_event = true;
        } else if ball <= -GOAL_STEPS {
            score.away += 1;
            events.push((tick, MatchEventKind::Goal { side: Side::Away }));
            ball = 0;
            goal_event = true;
        }

        let tick_events: Vec<EventId> = if goal_event {
            vec![EventId::new(EVENT_GOAL)]
        } else {
            Vec::new()
        };

        // Automaton cycle per live agent, home roster first.
        for (s, side_players) in sides.iter_mut().enumerate() {
            let side = if s == 0 { Side::Home } else { Side::Away };
            let controls = if s == 0 { home_controls } else { !home_controls };
            let ball_pos = ball_frame(side, ball);
            let nearest = nearest_live(side_players, &frame_positions[s], ball_pos);
            for (i, player) in side_players.iter_mut().enumerate() {
                if !player.alive {
                    continue;
                }
                let u = utilities(player, ball_pos.0, controls, nearest == Some(i));
                let outcome = automaton_step(&spec, &player.state, &tick_events, &u)?;
                let (x, y) = player.global(frame_positions[s][i]);
                rows.push(LogRow {
                    tick,
                    agent: player.id.clone(),
                    state: outcome.logged_state,
                    activity: outcome.activity,
                    x,
                    y,
                });
                player.state = outcome.next_state;
            }
        }
    }

    Ok(MatchLog::new(
        rows,
        events,
        score,
        seed,
        ticks,
        spec.state_ids(),
    ))
}

/// Which diversity metric a time series samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiversityMetric {
    /// Simple social entropy of the live agents' distinct positions.
    PositionalClasses,
    /// Hierarchic social entropy over the live agents' positions —
    /// continuous, so partial positional compensation shows up as
    /// partial recovery.
    PositionalHierarchic,
    /// Hierarchic social entropy over the agents' state-visit
    /// frequency vectors within each window.
    BehavioralHierarchic,
}

/// Per-window diversity of the live agents, as `(window start tick,
/// value)` pairs. The window length must divide the run length.
pub fn diversity_timeseries(
    log: &MatchLog,
    window: u64,
    metric: DiversityMetric,
) -> Result<Vec<(u64, f64)>> {
    diversity_timeseries_inner(log, window, metric, None)
}

/// Like [`diversity_timeseries`] but restricted to the given agents —
/// typically one team's roster of a two-team log.
pub fn diversity_timeseries_filtered(
    log: &MatchLog,
    window: u64,
    metric: DiversityMetric,
    agents: &[AgentId],
) -> Result<Vec<(u64, f64)>> {
    diversity_timeseries_inner(log, window, metric, Some(agents))
}

fn diversity_timeseries_inner(
    log: &MatchLog,
    window: u64,
    metric: DiversityMetric,
    filter: Option<&[AgentId]>,
) -> Result<Vec<(u64, f64)>> {
    if window == 0 || !log.ticks().is_multiple_of(window) {
        return Err(Error::InvalidSimRequest(format!(
            "window {window} does not divide the run length {}",
            log.ticks()
        )));
    }
    let mut series = Vec::with_capacity((log.ticks() / window) as usize);
    for start in (0..log.ticks()).step_by(window as usize) {
        let end = start + window;
        // Live agents: those still emitting rows at the window's last tick.
        let mut live: Vec<AgentId> = log.agents_at(end - 1);
        if let Some(keep) = filter {
            live.retain(|a| keep.contains(a));
        }
        if live.is_empty() {
            return Err(Error::InsufficientData(format!(
                "no live agents in window starting at {start}"
            )));
        }
        let value = match metric {
            DiversityMetric::PositionalClasses => {
                positional_class_entropy(log, &live, end - 1)?.bits()
            }
            DiversityMetric::PositionalHierarchic => {
                let society = position_society(log, &live, end - 1)?;
                hierarchic_entropy(&distance_matrix(&society)?).value()
            }
            DiversityMetric::BehavioralHierarchic => {
                let society = behavioral_features(log, &live, start..end)?;
                hierarchic_entropy(&distance_matrix(&society)?).value()
            }
        };
        series.push((start, value));
    }
    Ok(series)
}

fn positions_at(log: &MatchLog, agents: &[AgentId], tick: u64) -> Result<Vec<(f64, f64)>> {
    agents
        .iter()
        .map(|agent| {
            log.rows()
                .iter()
                .find(|r| r.tick == tick && &r.agent == agent)
                .map(|r| (r.x, r.y))
                .ok_or_else(|| Error::UnknownAgent(agent.to_string()))
        })
        .collect()
}

fn positional_class_entropy(
    log: &MatchLog,
    agents: &[AgentId],
    tick: u64,
) -> Result<EntropyValue> {
    let positions = positions_at(log, agents, tick)?;
    let mut counts: Vec<usize> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for pos in positions {
        let key = (pos.0.to_bits(), pos.1.to_bits());
        let next = counts.len();
        let slot = *index.entry(key).or_insert(next);
        if slot == counts.len() {
            counts.push(0);
        }
        counts[slot] += 1;
    }
    Ok(shannon_entropy(&Distribution::from_counts(&counts)?))
}

fn position_society(log: &MatchLog, agents: &[AgentId], tick: u64) -> Result<Society> {
    let positions = positions_at(log, agents, tick)?;
    let members = agents
        .iter()
        .zip(positions)
        .map(|(id, (x, y))| Agent {
            id: id.clone(),
            attributes: Default::default(),
            features: vec![x, y],
        })
        .collect::<Vec<_>>();
    Society::new(vec!["x".to_string(), "y".to_string()], members)
}
