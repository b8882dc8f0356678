//! Pairwise behavioral difference of policy tables.
//!
//! A policy maps discrete perceptual states to complex activities, so
//! the response difference between two agents in one state is binary:
//! 0 when they select the same activity, 1 otherwise — there are no
//! grades of difference between distinct activities. [`phi1`] averages
//! the response difference over the compared states; [`phi2`] weights
//! each state by the agents' own visit frequencies, so states an agent
//! actually inhabits count for more.
//!
//! For agents controlled by a situated automaton, the distribution of
//! automaton states over a long window is an observable proxy for
//! behavior: [`state_distribution`] extracts it from a match log and
//! [`behavioral_features`] packages those distributions as a feature
//! society ready for taxonomic analysis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::sim::MatchLog;
use crate::society::{Agent, AgentId, Society};
use crate::{Error, Result};

/// Identifier of a discrete perceptual / automaton state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(String);

impl StateId {
    pub fn new(id: impl Into<String>) -> Self {
        StateId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for StateId {
    fn from(s: &str) -> Self {
        StateId(s.to_owned())
    }
}

/// Identifier of an activity (the nominal value a policy selects).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionId(String);

impl ActionId {
    pub fn new(id: impl Into<String>) -> Self {
        ActionId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ActionId {
    fn from(s: &str) -> Self {
        ActionId(s.to_owned())
    }
}

/// Registry of the perceptual states policy tables may reference.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StateSpace {
    states: BTreeSet<StateId>,
}

impl StateSpace {
    pub fn new(states: impl IntoIterator<Item = StateId>) -> Self {
        StateSpace {
            states: states.into_iter().collect(),
        }
    }

    pub fn contains(&self, state: &StateId) -> bool {
        self.states.contains(state)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &StateId> {
        self.states.iter()
    }
}

/// Policy entry for one state: the selected activity and how many
/// times the agent was observed in the state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyEntry {
    pub action: ActionId,
    pub visits: u64,
}

/// An agent's fixed mapping from perceptual state to activity, with
/// visit counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyTable {
    agent: AgentId,
    entries: BTreeMap<StateId, PolicyEntry>,
}

impl PolicyTable {
    /// Build a table, validating every state against the shared space.
    pub fn new(
        agent: AgentId,
        space: &StateSpace,
        entries: impl IntoIterator<Item = (StateId, PolicyEntry)>,
    ) -> Result<Self> {
        let entries: BTreeMap<StateId, PolicyEntry> = entries.into_iter().collect();
        for state in entries.keys() {
            if !space.contains(state) {
                return Err(Error::UnknownState(state.to_string()));
            }
        }
        Ok(PolicyTable { agent, entries })
    }

    pub fn agent(&self) -> &AgentId {
        &self.agent
    }

    pub fn entries(&self) -> &BTreeMap<StateId, PolicyEntry> {
        &self.entries
    }

    pub fn action(&self, state: &StateId) -> Option<&ActionId> {
        self.entries.get(state).map(|e| &e.action)
    }

    pub fn total_visits(&self) -> u64 {
        self.entries.values().map(|e| e.visits).sum()
    }

    /// Visit frequency of `state` (0 for undefined states).
    pub fn frequency(&self, state: &StateId) -> f64 {
        let total = self.total_visits();
        if total == 0 {
            return 0.0;
        }
        self.entries
            .get(state)
            .map(|e| e.visits as f64 / total as f64)
            .unwrap_or(0.0)
    }

    /// Empirical policy of an agent over a log window: per visited
    /// state, the most frequent activity (ties broken by the
    /// lexicographically smallest activity id) with the state's visit
    /// count.
    pub fn from_match_log(log: &MatchLog, agent: &AgentId, window: Range<u64>) -> Result<Self> {
        let dist_rows = log_rows(log, agent, window)?;
        let mut per_state: BTreeMap<StateId, BTreeMap<ActionId, u64>> = BTreeMap::new();
        for (state, activity) in dist_rows {
            *per_state
                .entry(state)
                .or_default()
                .entry(activity)
                .or_insert(0) += 1;
        }
        let entries = per_state.into_iter().map(|(state, actions)| {
            let visits: u64 = actions.values().sum();
            let action = actions
                .into_iter()
                .max_by(|(a1, c1), (a2, c2)| c1.cmp(c2).then(a2.cmp(a1)))
                .map(|(a, _)| a)
                .expect("state has at least one activity");
            (state, PolicyEntry { action, visits })
        });
        let space = StateSpace::new(log.states().iter().cloned());
        PolicyTable::new(agent.clone(), &space, entries)
    }
}

/// Sorted union of states defined in either table.
fn defined_union<'a>(a: &'a PolicyTable, b: &'a PolicyTable) -> BTreeSet<&'a StateId> {
    a.entries.keys().chain(b.entries.keys()).collect()
}

/// Binary response difference in one state: 0 when both agents select
/// the same activity, 1 otherwise. A state defined for exactly one of
/// the agents counts as a difference — the absence of a policy is
/// itself a behavioral difference. Unknown states are rejected.
pub fn response_difference(
    space: &StateSpace,
    a: &PolicyTable,
    b: &PolicyTable,
    state: &StateId,
) -> Result<u32> {
    if !space.contains(state) {
        return Err(Error::UnknownState(state.to_string()));
    }
    Ok(match (a.action(state), b.action(state)) {
        (Some(x), Some(y)) if x == y => 0,
        (None, None) => 0,
        _ => 1,
    })
}

/// Unweighted behavioral difference: the fraction of compared states
/// on which the two policies disagree.
///
/// Normalizing by the number of compared states (the union of states
/// defined for either agent) is what actually bounds the value to
/// `[0, 1]`.
pub fn phi1(a: &PolicyTable, b: &PolicyTable) -> Result<f64> {
    let union = defined_union(a, b);
    if union.is_empty() {
        return Err(Error::EmptyStateSet);
    }
    let differing = union
        .iter()
        .filter(|state| {
            match (a.action(state), b.action(state)) {
                (Some(x), Some(y)) => x != y,
                (None, None) => false,
                _ => true,
            }
        })
        .count();
    Ok(differing as f64 / union.len() as f64)
}

/// Visit-weighted behavioral difference:
/// `Σ_i ((p_a(i) + p_b(i)) / 2) · |π_a(i) − π_b(i)|`,
/// where `p_x(i)` is agent x's own visit frequency of state `i`. A
/// state unvisited by an agent carries zero weight for that agent, so
/// a state visited by only one of the two carries half the visiting
/// agent's weight.
pub fn phi2(a: &PolicyTable, b: &PolicyTable) -> Result<f64> {
    let (total_a, total_b) = (a.total_visits(), b.total_visits());
    if total_a == 0 {
        return Err(Error::ZeroVisits(a.agent.to_string()));
    }
    if total_b == 0 {
        return Err(Error::ZeroVisits(b.agent.to_string()));
    }
    // Summing the integer visit counts first keeps the [0, 1] bound
    // exact: each side contributes at most total/2·total = 1/2.
    let mut diff_a: u64 = 0;
    let mut diff_b: u64 = 0;
    for state in defined_union(a, b) {
        let differs = match (a.action(state), b.action(state)) {
            (Some(x), Some(y)) => x != y,
            (None, None) => false,
            _ => true,
        };
        if differs {
            diff_a += a.entries.get(state).map(|e| e.visits).unwrap_or(0);
            diff_b += b.entries.get(state).map(|e| e.visits).unwrap_or(0);
        }
    }
    Ok(diff_a as f64 / (2.0 * total_a as f64) + diff_b as f64 / (2.0 * total_b as f64))
}

/// Both behavioral difference metrics for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BehavioralDifference {
    pub phi1: f64,
    pub phi2: f64,
}

pub fn behavioral_difference(a: &PolicyTable, b: &PolicyTable) -> Result<BehavioralDifference> {
    Ok(BehavioralDifference {
        phi1: phi1(a, b)?,
        phi2: phi2(a, b)?,
    })
}

/// Behavioral equivalence: identical activity on every state defined
/// for either agent.
pub fn is_equivalent(a: &PolicyTable, b: &PolicyTable) -> bool {
    defined_union(a, b).iter().all(|state| {
        match (a.action(state), b.action(state)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    })
}

/// Behavioral ε-similarity: `phi2 < ε`.
pub fn is_epsilon_similar(a: &PolicyTable, b: &PolicyTable, epsilon: f64) -> Result<bool> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    Ok(phi2(a, b)? < epsilon)
}

/// Behavioral ε-homogeneity of a society: every unordered pair of
/// tables is ε-similar.
pub fn is_epsilon_homogeneous(tables: &[PolicyTable], epsilon: f64) -> Result<bool> {
    if tables.len() < 2 {
        return Err(Error::TooFewTables(tables.len()));
    }
    for (i, a) in tables.iter().enumerate() {
        for b in &tables[i + 1..] {
            if !is_epsilon_similar(a, b, epsilon)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// How often an agent inhabited each automaton state over a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateVisitDistribution {
    pub agent: AgentId,
    pub frequencies: BTreeMap<StateId, f64>,
}

fn log_rows(
    log: &MatchLog,
    agent: &AgentId,
    window: Range<u64>,
) -> Result<Vec<(StateId, ActionId)>> {
    if window.is_empty() {
        return Err(Error::EmptyWindow);
    }
    if !log.has_agent(agent) {
        return Err(Error::UnknownAgent(agent.to_string()));
    }
    let rows: Vec<(StateId, ActionId)> = log
        .rows()
        .iter()
        .filter(|r| r.agent == *agent && window.contains(&r.tick))
        .map(|r| (r.state.clone(), r.activity.clone()))
        .collect();
    if rows.is_empty() {
        return Err(Error::InsufficientData(format!(
            "agent `{agent}` emitted no rows in ticks {}..{}",
            window.start, window.end
        )));
    }
    Ok(rows)
}

/// Frequency of each automaton state for one agent over a tick window.
/// Special actions appear under their virtual state, exactly as the
/// log recorded them.
pub fn state_distribution(
    log: &MatchLog,
    agent: &AgentId,
    window: Range<u64>,
) -> Result<StateVisitDistribution> {
    let rows = log_rows(log, agent, window)?;
    let total = rows.len() as f64;
    let mut counts: BTreeMap<StateId, u64> = BTreeMap::new();
    for (state, _) in rows {
        *counts.entry(state).or_insert(0) += 1;
    }
    let frequencies = counts
        .into_iter()
        .map(|(s, c)| (s, c as f64 / total))
        .collect();
    Ok(StateVisitDistribution {
        agent: agent.clone(),
        frequencies,
    })
}

/// Package the agents' state-visit frequency vectors as a society:
/// one feature dimension per automaton state in the log's registry
/// (including virtual special-action states), ready for taxonomic
/// distance and hierarchic entropy.
pub fn behavioral_features(
    log: &MatchLog,
    agents: &[AgentId],
    window: Range<u64>,
) -> Result<Society> {
    let states = log.states();
    let mut members = Vec::with_capacity(agents.len());
    for agent in agents {
        let dist = state_distribution(log, agent, window.clone())?;
        let features: Vec<f64> = states
            .iter()
            .map(|s| dist.frequencies.get(s).copied().unwrap_or(0.0))
            .collect();
        members.push(Agent {
            id: agent.clone(),
            attributes: BTreeMap::new(),
            features,
        });
    }
    let dims = states.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    Society::new(dims, members)
}

/// Parse policy tables from CSV text with the header
/// `agent_id,state_id,action_id,visit_count`. Returns the state space
/// (the union of all states mentioned) together with one table per
/// agent, in first-appearance order.
pub fn parse_policy_csv(text: &str) -> Result<(StateSpace, Vec<PolicyTable>)> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty policy file".into()))?
        .1
        .trim();
    if header != "agent_id,state_id,action_id,visit_count" {
        return Err(Error::Parse(format!(
            "line 1: expected header `agent_id,state_id,action_id,visit_count`, got `{header}`"
        )));
    }

    let mut order: Vec<AgentId> = Vec::new();
    let mut raw: BTreeMap<AgentId, BTreeMap<StateId, PolicyEntry>> = BTreeMap::new();
    let mut states = BTreeSet::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!(
                "line {}: expected 4 fields, got {}",
                idx + 1,
                fields.len()
            )));
        }
        let agent = AgentId::new(fields[0]);
        let state = StateId::new(fields[1]);
        let action = ActionId::new(fields[2]);
        let visits: u64 = fields[3].parse().map_err(|_| {
            Error::Parse(format!(
                "line {}: field `visit_count` is not a non-negative integer: `{}`",
                idx + 1,
                fields[3]
            ))
        })?;
        states.insert(state.clone());
        if !raw.contains_key(&agent) {
            order.push(agent.clone());
        }
        let table = raw.entry(agent.clone()).or_default();
        if table
            .insert(state.clone(), PolicyEntry { action, visits })
            .is_some()
        {
            return Err(Error::Parse(format!(
                "line {}: duplicate (agent `{agent}`, state `{state}`) row",
                idx + 1
            )));
        }
    }

    let space = StateSpace::new(states);
    let tables = order
        .into_iter()
        .map(|agent| {
            let entries = raw.remove(&agent).expect("agent recorded");
            PolicyTable::new(agent, &space, entries)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((space, tables))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> StateSpace {
        StateSpace::new(["s1", "s2", "s3", "s4"].map(StateId::from))
    }

    fn table(agent: &str, rows: &[(&str, &str, u64)]) -> PolicyTable {
        PolicyTable::new(
            AgentId::new(agent),
            &space(),
            rows.iter().map(|(s, a, v)| {
                (
                    StateId::from(*s),
                    PolicyEntry {
                        action: ActionId::from(*a),
                        visits: *v,
                    },
                )
            }),
        )
        .unwrap()
    }

    #[test]
    fn response_difference_basics() {
        let sp = space();
        let a = table("a", &[("s1", "walk along wall", 3)]);
        let b = table("b", &[("s1", "walk along wall", 9)]);
        let c = table("c", &[("s1", "dribble", 1)]);
        let s1 = StateId::from("s1");
        assert_eq!(response_difference(&sp, &a, &b, &s1).unwrap(), 0);
        assert_eq!(response_difference(&sp, &a, &c, &s1).unwrap(), 1);
        assert!(matches!(
            response_difference(&sp, &a, &b, &StateId::from("nope")),
            Err(Error::UnknownState(_))
        ));
        // Defined for one side only counts as a difference.
        let d = table("d", &[("s1", "walk along wall", 1), ("s2", "idle", 1)]);
        assert_eq!(
            response_difference(&sp, &a, &d, &StateId::from("s2")).unwrap(),
            1
        );
        // Defined for neither side: no difference.
        assert_eq!(
            response_difference(&sp, &a, &b, &StateId::from("s3")).unwrap(),
            0
        );
    }

    #[test]
    fn phi1_examples() {
        let a = table("a", &[("s1", "x", 1), ("s2", "y", 1), ("s3", "z", 1), ("s4", "w", 1)]);
        let same = table("b", &[("s1", "x", 1), ("s2", "y", 1), ("s3", "z", 1), ("s4", "w", 1)]);
        let one_off = table("c", &[("s1", "x", 1), ("s2", "y", 1), ("s3", "z", 1), ("s4", "q", 1)]);
        let all_off = table("d", &[("s1", "p", 1), ("s2", "q", 1), ("s3", "r", 1), ("s4", "s", 1)]);
        assert_eq!(phi1(&a, &same).unwrap(), 0.0);
        assert_eq!(phi1(&a, &one_off).unwrap(), 0.25);
        assert_eq!(phi1(&a, &all_off).unwrap(), 1.0);
    }

    #[test]
    fn phi1_empty_union_is_error() {
        let a = table("a", &[]);
        let b = table("b", &[]);
        assert!(matches!(phi1(&a, &b), Err(Error::EmptyStateSet)));
    }

    #[test]
    fn phi2_weighted_example() {
        // p_a = (0.5, 0.5, 0), p_b = (0, 0.5, 0.5); agree only on s2.
        let a = table("a", &[("s1", "x", 5), ("s2", "y", 5)]);
        let b = table("b", &[("s2", "y", 5), ("s3", "z", 5)]);
        assert!((phi2(&a, &b).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn phi2_identical_and_disjoint() {
        let a = table("a", &[("s1", "x", 2), ("s2", "y", 8)]);
        let same = table("b", &[("s1", "x", 20), ("s2", "y", 80)]);
        assert_eq!(phi2(&a, &same).unwrap(), 0.0);

        let disjoint = table("c", &[("s1", "p", 2), ("s2", "q", 8)]);
        assert!((phi2(&a, &disjoint).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phi2_rejects_zero_visits() {
        let a = table("a", &[("s1", "x", 0)]);
        let b = table("b", &[("s1", "x", 5)]);
        assert!(matches!(phi2(&a, &b), Err(Error::ZeroVisits(_))));
    }

    #[test]
    fn equivalence_examples() {
        let a = table("a", &[("s1", "x", 1), ("s2", "y", 2)]);
        let same = table("b", &[("s1", "x", 7), ("s2", "y", 1)]);
        let off = table("c", &[("s1", "x", 1), ("s2", "q", 2)]);
        assert!(is_equivalent(&a, &same));
        assert!(!is_equivalent(&a, &off));
        assert_eq!(phi2(&a, &same).unwrap(), 0.0);
        assert_eq!(phi1(&a, &same).unwrap(), 0.0);
    }

    #[test]
    fn phi2_zero_does_not_imply_equivalence() {
        // The two tables disagree only on a state neither ever visited.
        let a = table("a", &[("s1", "x", 10), ("s2", "never", 0)]);
        let b = table("b", &[("s1", "x", 10), ("s2", "other", 0)]);
        assert_eq!(phi2(&a, &b).unwrap(), 0.0);
        assert!(!is_equivalent(&a, &b));
    }

    #[test]
    fn epsilon_similarity() {
        let a = table("a", &[("s1", "x", 5), ("s2", "y", 5)]);
        let b = table("b", &[("s2", "y", 5), ("s3", "z", 5)]); // phi2 = 0.5
        assert!(is_epsilon_similar(&a, &a.clone(), 0.001).unwrap());
        assert!(!is_epsilon_similar(&a, &b, 0.5).unwrap());
        assert!(is_epsilon_similar(&a, &b, 0.6).unwrap());
        assert!(matches!(
            is_epsilon_similar(&a, &b, 0.0),
            Err(Error::InvalidEpsilon(_))
        ));
    }

    #[test]
    fn epsilon_homogeneity() {
        let a = table("a", &[("s1", "x", 5)]);
        let b = table("b", &[("s1", "x", 9)]);
        let deviant = table("c", &[("s1", "q", 9)]);
        assert!(is_epsilon_homogeneous(&[a.clone(), b.clone()], 0.1).unwrap());
        assert!(!is_epsilon_homogeneous(&[a.clone(), b, deviant], 0.1).unwrap());
        assert!(matches!(
            is_epsilon_homogeneous(&[a], 0.1),
            Err(Error::TooFewTables(1))
        ));
    }

    #[test]
    fn policy_csv_round_trip() {
        let text = "\
agent_id,state_id,action_id,visit_count
r1,s1,advance,10
r1,s2,hold,5
r2,s1,advance,7
r2,s2,retreat,3
";
        let (space, tables) = parse_policy_csv(text).unwrap();
        assert_eq!(space.len(), 2);
        assert_eq!(tables.len(), 2);
        assert_eq!(tables[0].agent().as_str(), "r1");
        assert_eq!(tables[0].total_visits(), 15);
        let d = behavioral_difference(&tables[0], &tables[1]).unwrap();
        assert_eq!(d.phi1, 0.5);
        // Disagreement on s2 carries (5/15 + 3/10)/2.
        assert!((d.phi2 - (5.0 / 15.0 + 0.3) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn policy_csv_diagnostics() {
        assert!(matches!(parse_policy_csv(""), Err(Error::Parse(_))));
        let bad_header = "a,b,c,d\nr1,s1,x,1\n";
        assert!(matches!(parse_policy_csv(bad_header), Err(Error::Parse(_))));
        let bad_count = "agent_id,state_id,action_id,visit_count\nr1,s1,x,-2\n";
        let err = parse_policy_csv(bad_count).unwrap_err();
        assert!(err.to_string().contains("line 2"));
        let dup = "agent_id,state_id,action_id,visit_count\nr1,s1,x,1\nr1,s1,y,2\n";
        assert!(matches!(parse_policy_csv(dup), Err(Error::Parse(_))));
    }

    mod log_analysis {
        use super::*;
        use crate::sim::{LogRow, MatchLog, Score};
        use crate::taxonomy::{distance_matrix, hierarchic_entropy, taxonomic_distance};

        /// Hand-built log: per agent, the sequence of (state, activity)
        /// pairs over consecutive ticks.
        fn synthetic_log(
            states: &[&str],
            agents: &[(&str, Vec<(&str, &str)>)],
        ) -> MatchLog {
            let ticks = agents[0].1.len() as u64;
            let mut rows = Vec::new();
            for tick in 0..ticks {
                for (agent, history) in agents {
                    let (state, activity) = history[tick as usize];
                    rows.push(LogRow {
                        tick,
                        agent: AgentId::new(*agent),
                        state: StateId::new(state),
                        activity: ActionId::new(activity),
                        x: 0.0,
                        y: 0.0,
                    });
                }
            }
            MatchLog::new(
                rows,
                Vec::new(),
                Score::default(),
                0,
                ticks,
                states.iter().map(|s| StateId::new(*s)).collect(),
            )
        }

        #[test]
        fn idle_agent_concentrates_on_the_idle_state() {
            let log = synthetic_log(
                &["idle", "work"],
                &[("lazy", vec![("idle", "rest"); 8])],
            );
            let dist =
                state_distribution(&log, &AgentId::new("lazy"), 0..8).unwrap();
            assert_eq!(dist.frequencies[&StateId::new("idle")], 1.0);
            assert_eq!(dist.frequencies.len(), 1);
        }

        #[test]
        fn frequencies_sum_to_one_and_match_a_recount() {
            let history = vec![
                ("a", "x"),
                ("b", "y"),
                ("a", "x"),
                ("a", "x"),
                ("b", "y"),
                ("c", "z"),
            ];
            let log = synthetic_log(&["a", "b", "c"], &[("r", history.clone())]);
            let dist = state_distribution(&log, &AgentId::new("r"), 0..6).unwrap();
            let sum: f64 = dist.frequencies.values().sum();
            assert!((sum - 1.0).abs() <= 1e-12);

            // Independent recount of the raw rows.
            for (state, expected) in [("a", 3.0 / 6.0), ("b", 2.0 / 6.0), ("c", 1.0 / 6.0)] {
                let manual = history.iter().filter(|(s, _)| *s == state).count() as f64
                    / history.len() as f64;
                assert_eq!(manual, expected);
                assert_eq!(dist.frequencies[&StateId::new(state)], expected);
            }
        }

        #[test]
        fn state_distribution_errors() {
            let log = synthetic_log(&["a"], &[("r", vec![("a", "x"); 4])]);
            assert!(matches!(
                state_distribution(&log, &AgentId::new("ghost"), 0..4),
                Err(Error::UnknownAgent(_))
            ));
            #[allow(clippy::reversed_empty_ranges)]
            let empty = 3..3;
            assert!(matches!(
                state_distribution(&log, &AgentId::new("r"), empty),
                Err(Error::EmptyWindow)
            ));
        }

        #[test]
        fn identical_behavior_has_zero_hierarchic_entropy() {
            let history = vec![("a", "x"), ("b", "y"), ("a", "x"), ("b", "y")];
            let log = synthetic_log(
                &["a", "b"],
                &[("r1", history.clone()), ("r2", history)],
            );
            let society = behavioral_features(
                &log,
                &[AgentId::new("r1"), AgentId::new("r2")],
                0..4,
            )
            .unwrap();
            let s = hierarchic_entropy(&distance_matrix(&society).unwrap());
            assert_eq!(s.value(), 0.0);
        }

        #[test]
        fn disjoint_single_state_behaviors_sit_sqrt_two_apart() {
            let log = synthetic_log(
                &["a", "b"],
                &[
                    ("r1", vec![("a", "x"); 5]),
                    ("r2", vec![("b", "y"); 5]),
                ],
            );
            let society = behavioral_features(
                &log,
                &[AgentId::new("r1"), AgentId::new("r2")],
                0..5,
            )
            .unwrap();
            // One dimension per registry state.
            assert_eq!(society.dimension_names().len(), 2);
            let d = taxonomic_distance(
                &society.agents()[0].features,
                &society.agents()[1].features,
            )
            .unwrap();
            assert!((d - 2f64.sqrt()).abs() <= 1e-12);
        }

        #[test]
        fn empirical_policy_from_log_takes_the_majority_activity() {
            let history = vec![
                ("a", "x"),
                ("a", "x"),
                ("a", "z"),
                ("b", "y"),
            ];
            let log = synthetic_log(&["a", "b"], &[("r", history)]);
            let table =
                PolicyTable::from_match_log(&log, &AgentId::new("r"), 0..4).unwrap();
            assert_eq!(
                table.action(&StateId::new("a")),
                Some(&ActionId::new("x"))
            );
            assert_eq!(table.entries()[&StateId::new("a")].visits, 3);
            assert_eq!(table.total_visits(), 4);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_tables() -> impl Strategy<Value = (PolicyTable, PolicyTable)> {
            let actions = prop::sample::select(vec!["x", "y", "z"]);
            let entry = (actions, 0u64..20);
            (
                proptest::collection::vec(entry.clone(), 4),
                proptest::collection::vec(entry, 4),
            )
                .prop_map(|(ra, rb)| {
                    let build = |agent: &str, rows: Vec<(&str, u64)>| {
                        table(
                            agent,
                            &rows
                                .iter()
                                .enumerate()
                                .map(|(i, (act, v))| {
                                    let state: &'static str =
                                        ["s1", "s2", "s3", "s4"][i];
                                    (state, *act, *v)
                                })
                                .collect::<Vec<_>>(),
                        )
                    };
                    (build("a", ra), build("b", rb))
                })
                .prop_filter("both agents need visits", |(a, b)| {
                    a.total_visits() > 0 && b.total_visits() > 0
                })
        }

        proptest! {
            #[test]
            fn bounds_and_symmetry((a, b) in arb_tables()) {
                let p1 = phi1(&a, &b).unwrap();
                let p2 = phi2(&a, &b).unwrap();
                prop_assert!((0.0..=1.0).contains(&p1));
                prop_assert!((0.0..=1.0).contains(&p2));
                prop_assert_eq!(p1, phi1(&b, &a).unwrap());
                prop_assert_eq!(p2, phi2(&b, &a).unwrap());
                if is_equivalent(&a, &b) {
                    prop_assert_eq!(p1, 0.0);
                    prop_assert_eq!(p2, 0.0);
                }
            }

            /// Shifting visit share toward a disagreeing state strictly
            /// increases phi2.
            #[test]
            fn phi2_weight_monotonicity(extra in 1u64..50) {
                let a = table("a", &[("s1", "x", 10), ("s2", "y", 10)]);
                let b = table("b", &[("s1", "x", 10), ("s2", "q", 10)]);
                let before = phi2(&a, &b).unwrap();
                let b_shifted = table("b", &[("s1", "x", 10), ("s2", "q", 10 + extra)]);
                let after = phi2(&a, &b_shifted).unwrap();
                prop_assert!(after > before);
            }

            /// ε-homogeneity is monotone in ε and matches the explicit
            /// all-pairs check.
            #[test]
            fn homogeneity_monotone_and_bruteforce(
                seed_tables in proptest::collection::vec(arb_tables(), 2..4),
                eps in 0.01f64..1.0,
                factor in 1.01f64..4.0,
            ) {
                let tables: Vec<PolicyTable> = seed_tables
                    .into_iter()
                    .enumerate()
                    .flat_map(|(i, (a, b))| {
                        let mut a = a; let mut b = b;
                        a.agent = AgentId::new(format!("a{i}"));
                        b.agent = AgentId::new(format!("b{i}"));
                        [a, b]
                    })
                    .collect();
                let verdict = is_epsilon_homogeneous(&tables, eps).unwrap();

                let mut brute = true;
                for i in 0..tables.len() {
                    for j in (i + 1)..tables.len() {
                        brute &= phi2(&tables[i], &tables[j]).unwrap() < eps;
                    }
                }
                prop_assert_eq!(verdict, brute);

                if verdict {
                    prop_assert!(is_epsilon_homogeneous(&tables, eps * factor).unwrap());
                }
            }
        }
    }
}
