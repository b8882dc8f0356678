//! The situated automaton: states tied to unique activities, with
//! mandatory reactive transitions evaluated before utility-ranked
//! deliberative candidates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::behavior::{ActionId, StateId};
use crate::{Error, Result};

/// Environment event the reactive layer may respond to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventId(String);

impl EventId {
    pub fn new(id: impl Into<String>) -> Self {
        EventId(id.into())
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Event fired on every tick in which a goal was scored.
pub const EVENT_GOAL: &str = "goal";

/// One deliberative candidate: perform `activity`, then sit in
/// `next_state` (which may be the current state — remaining in place
/// is an ordinary transition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub activity: ActionId,
    pub next_state: StateId,
}

/// One automaton state. Each state is tied to a unique activity;
/// virtual states exist only to log special actions and are never
/// inhabited between ticks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDef {
    pub id: StateId,
    pub activity: ActionId,
    pub is_virtual: bool,
    pub candidates: Vec<Candidate>,
}

/// A validated automaton design shared by every agent of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonSpec {
    states: Vec<StateDef>,
    reactive: BTreeMap<(StateId, EventId), StateId>,
    activity_owner: BTreeMap<ActionId, StateId>,
}

impl AutomatonSpec {
    /// Validates: unique state ids, a bijection between states and
    /// activities, at least one deliberative candidate per state, and
    /// transitions/candidates that reference known states. The
    /// `BTreeMap` key guarantees at most one reactive transition per
    /// `(state, event)` pair.
    pub fn new(
        states: Vec<StateDef>,
        reactive: impl IntoIterator<Item = ((StateId, EventId), StateId)>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        let ids: BTreeSet<&StateId> = states.iter().map(|s| &s.id).collect();
        if ids.len() != states.len() {
            return Err(Error::InvalidAutomaton("duplicate state ids".into()));
        }
        let mut activity_owner = BTreeMap::new();
        for state in &states {
            if activity_owner
                .insert(state.activity.clone(), state.id.clone())
                .is_some()
            {
                return Err(Error::InvalidAutomaton(format!(
                    "activity `{}` is tied to more than one state",
                    state.activity
                )));
            }
            if state.candidates.is_empty() {
                return Err(Error::InvalidAutomaton(format!(
                    "state `{}` has no deliberative candidates",
                    state.id
                )));
            }
            for c in &state.candidates {
                if !ids.contains(&c.next_state) {
                    return Err(Error::InvalidAutomaton(format!(
                        "candidate of `{}` transitions to unknown state `{}`",
                        state.id, c.next_state
                    )));
                }
            }
        }
        for state in &states {
            for c in &state.candidates {
                if !activity_owner.contains_key(&c.activity) {
                    return Err(Error::InvalidAutomaton(format!(
                        "candidate activity `{}` is not tied to any state",
                        c.activity
                    )));
                }
            }
        }
        let reactive: BTreeMap<(StateId, EventId), StateId> = reactive.into_iter().collect();
        for ((from, _), to) in &reactive {
            if !ids.contains(from) || !ids.contains(to) {
                return Err(Error::InvalidAutomaton(format!(
                    "reactive transition references unknown state (`{from}` -> `{to}`)"
                )));
            }
        }
        Ok(AutomatonSpec {
            states,
            reactive,
            activity_owner,
        })
    }

    pub fn states(&self) -> &[StateDef] {
        &self.states
    }

    pub fn state_ids(&self) -> Vec<StateId> {
        self.states.iter().map(|s| s.id.clone()).collect()
    }

    pub fn state(&self, id: &StateId) -> Result<&StateDef> {
        self.states
            .iter()
            .find(|s| &s.id == id)
            .ok_or_else(|| Error::UnknownState(id.to_string()))
    }

    /// The state whose tied activity is `activity`.
    pub fn activity_owner(&self, activity: &ActionId) -> &StateId {
        self.activity_owner
            .get(activity)
            .expect("validated: every candidate activity has an owner")
    }
}

/// Outcome of one automaton cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    /// Activity performed this tick.
    pub activity: ActionId,
    /// State the automaton persists in for the next cycle.
    pub next_state: StateId,
    /// State under which the tick is logged: the state owning the
    /// performed activity. Differs from `next_state` exactly when a
    /// special action fired — the log then shows the virtual state, as
    /// if the agent had been there.
    pub logged_state: StateId,
    /// Whether a mandatory reactive transition preempted deliberation.
    pub via_reactive: bool,
}

/// Run one cycle of the automaton.
///
/// Reactive outcomes are evaluated first, in the order the events are
/// given: the first `(state, event)` pair with a mandatory transition
/// wins and no deliberation happens. Otherwise the deliberative
/// candidate with the highest utility is selected; ties go to the
/// lowest candidate index. `utilities` must score each candidate of
/// the current state.
pub fn automaton_step(
    spec: &AutomatonSpec,
    state: &StateId,
    events: &[EventId],
    utilities: &[f64],
) -> Result<StepOutcome> {
    let current = spec.state(state)?;

    for event in events {
        if let Some(next) = spec.reactive.get(&(state.clone(), event.clone())) {
            let target = spec.state(next)?;
            return Ok(StepOutcome {
                activity: target.activity.clone(),
                next_state: next.clone(),
                logged_state: next.clone(),
                via_reactive: true,
            });
        }
    }

    if utilities.len() != current.candidates.len() {
        return Err(Error::InvalidSimRequest(format!(
            "state `{state}` has {} candidates but {} utilities were supplied",
            current.candidates.len(),
            utilities.len()
        )));
    }
    let mut best = 0;
    for (i, u) in utilities.iter().enumerate().skip(1) {
        if *u > utilities[best] {
            best = i;
        }
    }
    let chosen = &current.candidates[best];
    Ok(StepOutcome {
        activity: chosen.activity.clone(),
        next_state: chosen.next_state.clone(),
        logged_state: spec.activity_owner(&chosen.activity).clone(),
        via_reactive: false,
    })
}

/// State ids of the default automaton.
pub mod states {
    pub const GUARD: &str = "guard";
    pub const HOLD: &str = "hold";
    pub const ADVANCE: &str = "advance";
    pub const RETREAT: &str = "retreat";
    /// Virtual state logging the kick special action.
    pub const KICK: &str = "kick";
}

/// Activity ids of the default automaton.
pub mod activities {
    pub const GUARD_GOAL: &str = "guard_goal";
    pub const HOLD_POSITION: &str = "hold_position";
    pub const PRESS_FORWARD: &str = "press_forward";
    pub const FALL_BACK: &str = "fall_back";
    pub const KICK_BALL: &str = "kick_ball";
}

/// The automaton design every simulated agent runs.
///
/// Four inhabitable states (guard, hold, advance, retreat) each tied
/// to a unique activity, plus the virtual `kick` state that logs the
/// kick special action. Every inhabitable state offers the same five
/// candidates: move to any of the four states, or kick and remain
/// where it is. A goal fires a mandatory reactive regroup to `hold`.
pub fn default_automaton() -> AutomatonSpec {
    let real = [
        (states::GUARD, activities::GUARD_GOAL),
        (states::HOLD, activities::HOLD_POSITION),
        (states::ADVANCE, activities::PRESS_FORWARD),
        (states::RETREAT, activities::FALL_BACK),
    ];
    let mut defs = Vec::new();
    for (id, activity) in real {
        let mut candidates: Vec<Candidate> = real
            .iter()
            .map(|(next, act)| Candidate {
                activity: ActionId::new(*act),
                next_state: StateId::new(*next),
            })
            .collect();
        candidates.push(Candidate {
            activity: ActionId::new(activities::KICK_BALL),
            next_state: StateId::new(id),
        });
        defs.push(StateDef {
            id: StateId::new(id),
            activity: ActionId::new(activity),
            is_virtual: false,
            candidates,
        });
    }
    // The virtual kick state is never inhabited; its single candidate
    // exists to satisfy the at-least-one-candidate invariant.
    defs.push(StateDef {
        id: StateId::new(states::KICK),
        activity: ActionId::new(activities::KICK_BALL),
        is_virtual: true,
        candidates: vec![Candidate {
            activity: ActionId::new(activities::HOLD_POSITION),
            next_state: StateId::new(states::HOLD),
        }],
    });

    let reactive = real.iter().map(|(id, _)| {
        (
            (StateId::new(*id), EventId::new(EVENT_GOAL)),
            StateId::new(states::HOLD),
        )
    });

    AutomatonSpec::new(defs, reactive).expect("default automaton is valid")
}
