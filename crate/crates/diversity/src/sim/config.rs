//! Team configurations: the eleven positional roles, the
//! offensiveness trait, and the six built-in team fixtures with their
//! positional and trait entropies.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::entropy::{shannon_entropy, EntropyValue};
use crate::society::{AgentId, Distribution};
use crate::{Error, Result};

/// The eleven positional roles. Exactly one Goalie is allowed per
/// team; the remaining roles may repeat freely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoleName {
    Goalie,
    LeftDefender,
    CenterDefender,
    RightDefender,
    LeftMidfield,
    CenterLeftMidfield,
    CenterRightMidfield,
    RightMidfield,
    LeftForward,
    CenterForward,
    RightForward,
}

impl RoleName {
    pub const ALL: [RoleName; 11] = [
        RoleName::Goalie,
        RoleName::LeftDefender,
        RoleName::CenterDefender,
        RoleName::RightDefender,
        RoleName::LeftMidfield,
        RoleName::CenterLeftMidfield,
        RoleName::CenterRightMidfield,
        RoleName::RightMidfield,
        RoleName::LeftForward,
        RoleName::CenterForward,
        RoleName::RightForward,
    ];

    /// Canonical home position on the normalized field, in the team's
    /// own attacking frame: own goal at x = 0, opponent goal at x = 1.
    /// The coordinates are fixture constants of this simulator.
    pub fn canonical_home(self) -> (f64, f64) {
        match self {
            RoleName::Goalie => (0.05, 0.50),
            RoleName::LeftDefender => (0.25, 0.20),
            RoleName::CenterDefender => (0.25, 0.50),
            RoleName::RightDefender => (0.25, 0.80),
            RoleName::LeftMidfield => (0.50, 0.15),
            RoleName::CenterLeftMidfield => (0.50, 0.38),
            RoleName::CenterRightMidfield => (0.50, 0.62),
            RoleName::RightMidfield => (0.50, 0.85),
            RoleName::LeftForward => (0.78, 0.25),
            RoleName::CenterForward => (0.78, 0.50),
            RoleName::RightForward => (0.78, 0.75),
        }
    }
}

/// A positional role: its name plus the home position it anchors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRole", into = "RawRole")]
pub struct Role {
    pub name: RoleName,
    pub home: (f64, f64),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRole {
    name: RoleName,
    #[serde(skip_serializing_if = "Option::is_none")]
    home: Option<(f64, f64)>,
}

impl TryFrom<RawRole> for Role {
    type Error = String;

    fn try_from(raw: RawRole) -> std::result::Result<Self, String> {
        let home = raw.home.unwrap_or_else(|| raw.name.canonical_home());
        let ok = |v: f64| v.is_finite() && (0.0..=1.0).contains(&v);
        if !(ok(home.0) && ok(home.1)) {
            return Err(format!("home position {home:?} outside the unit field"));
        }
        Ok(Role {
            name: raw.name,
            home,
        })
    }
}

impl From<Role> for RawRole {
    fn from(role: Role) -> RawRole {
        RawRole {
            name: role.name,
            home: Some(role.home),
        }
    }
}

impl Role {
    pub fn new(name: RoleName) -> Self {
        Role {
            name,
            home: name.canonical_home(),
        }
    }
}

/// Cross-situational response bias toward offensive play, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTraits", into = "RawTraits")]
pub struct TraitProfile {
    pub offensiveness: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTraits {
    offensiveness: f64,
}

impl TryFrom<RawTraits> for TraitProfile {
    type Error = String;

    fn try_from(raw: RawTraits) -> std::result::Result<Self, String> {
        TraitProfile::new(raw.offensiveness).map_err(|e| e.to_string())
    }
}

impl From<TraitProfile> for RawTraits {
    fn from(t: TraitProfile) -> RawTraits {
        RawTraits {
            offensiveness: t.offensiveness,
        }
    }
}

impl TraitProfile {
    pub fn new(offensiveness: f64) -> Result<Self> {
        if !(offensiveness.is_finite() && (0.0..=1.0).contains(&offensiveness)) {
            return Err(Error::InvalidTeamConfig(format!(
                "offensiveness must be in [0, 1], got {offensiveness}"
            )));
        }
        Ok(TraitProfile { offensiveness })
    }
}

/// One configured player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerConfig {
    pub id: AgentId,
    pub role: Role,
    pub traits: TraitProfile,
}

/// A named team roster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTeam", into = "RawTeam")]
pub struct TeamConfig {
    name: String,
    players: Vec<PlayerConfig>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTeam {
    name: String,
    players: Vec<PlayerConfig>,
}

impl TryFrom<RawTeam> for TeamConfig {
    type Error = String;

    fn try_from(raw: RawTeam) -> std::result::Result<Self, String> {
        TeamConfig::new(raw.name, raw.players).map_err(|e| e.to_string())
    }
}

impl From<TeamConfig> for RawTeam {
    fn from(team: TeamConfig) -> RawTeam {
        RawTeam {
            name: team.name,
            players: team.players,
        }
    }
}

impl TeamConfig {
    /// Validates: at least one player, exactly one Goalie, distinct
    /// player ids.
    pub fn new(name: impl Into<String>, players: Vec<PlayerConfig>) -> Result<Self> {
        let name = name.into();
        if players.is_empty() {
            return Err(Error::InvalidTeamConfig(format!("team `{name}` has no players")));
        }
        let goalies = players
            .iter()
            .filter(|p| p.role.name == RoleName::Goalie)
            .count();
        if goalies != 1 {
            return Err(Error::InvalidTeamConfig(format!(
                "team `{name}` must have exactly one Goalie, found {goalies}"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for p in &players {
            if !seen.insert(&p.id) {
                return Err(Error::InvalidTeamConfig(format!(
                    "team `{name}` has duplicate player id `{}`",
                    p.id
                )));
            }
        }
        Ok(TeamConfig { name, players })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn players(&self) -> &[PlayerConfig] {
        &self.players
    }

    pub fn goalie(&self) -> &PlayerConfig {
        self.players
            .iter()
            .find(|p| p.role.name == RoleName::Goalie)
            .expect("validated: exactly one goalie")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("team serializes")
    }
}

fn roster(
    team: &str,
    entries: &[(RoleName, usize, f64)],
) -> TeamConfig {
    let mut players = Vec::new();
    let mut counter = 0usize;
    for &(role, count, offensiveness) in entries {
        for _ in 0..count {
            counter += 1;
            players.push(PlayerConfig {
                id: AgentId::new(format!("{}-{counter:02}", team.to_lowercase())),
                role: Role::new(role),
                traits: TraitProfile::new(offensiveness).expect("fixture trait valid"),
            });
        }
    }
    TeamConfig::new(team, players).expect("fixture roster valid")
}

fn full_lineup(team: &str, goalie_off: f64, def_off: f64, mid_off: f64, fwd_off: f64) -> TeamConfig {
    roster(
        team,
        &[
            (RoleName::Goalie, 1, goalie_off),
            (RoleName::LeftDefender, 1, def_off),
            (RoleName::CenterDefender, 1, def_off),
            (RoleName::RightDefender, 1, def_off),
            (RoleName::LeftMidfield, 1, mid_off),
            (RoleName::CenterLeftMidfield, 1, mid_off),
            (RoleName::CenterRightMidfield, 1, mid_off),
            (RoleName::RightMidfield, 1, mid_off),
            (RoleName::LeftForward, 1, fwd_off),
            (RoleName::CenterForward, 1, fwd_off),
            (RoleName::RightForward, 1, fwd_off),
        ],
    )
}

/// The six built-in team fixtures.
///
/// * `Kids0` — 1 Goalie + 10 CL/C Midfield, everyone at 0.80.
/// * `Agr` — 1 Goalie + 3 C Defender + 8 C Forward, everyone at 0.99.
///   The roster really does hold 12 players; its printed entropy
///   1.18872 matches the 12-player proportions (1, 3, 8)/12 exactly,
///   so the fixture keeps them.
/// * `Kids2` — 1 Goalie (0.00) + 5 C Defender (0.50) + 5 C Forward
///   (0.90).
/// * `Kids1` / `Kids3` — all eleven distinct positions at 0.50 / 0.80.
/// * `Control` — all eleven positions; goalie 0.00, defenders 0.30,
///   midfielders 0.60, forwards 0.90.
pub fn builtin_teams() -> Vec<TeamConfig> {
    vec![
        roster(
            "Kids0",
            &[
                (RoleName::Goalie, 1, 0.80),
                (RoleName::CenterLeftMidfield, 10, 0.80),
            ],
        ),
        roster(
            "Agr",
            &[
                (RoleName::Goalie, 1, 0.99),
                (RoleName::CenterDefender, 3, 0.99),
                (RoleName::CenterForward, 8, 0.99),
            ],
        ),
        roster(
            "Kids2",
            &[
                (RoleName::Goalie, 1, 0.00),
                (RoleName::CenterDefender, 5, 0.50),
                (RoleName::CenterForward, 5, 0.90),
            ],
        ),
        full_lineup("Kids1", 0.50, 0.50, 0.50, 0.50),
        full_lineup("Kids3", 0.80, 0.80, 0.80, 0.80),
        full_lineup("Control", 0.00, 0.30, 0.60, 0.90),
    ]
}

/// Look up a built-in team by name (case-insensitive).
pub fn builtin_team(name: &str) -> Result<TeamConfig> {
    builtin_teams()
        .into_iter()
        .find(|t| t.name().eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownTeam(name.to_owned()))
}

fn entropy_of_classes<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> EntropyValue {
    let mut counts: Vec<usize> = Vec::new();
    let mut index: std::collections::HashMap<K, usize> = std::collections::HashMap::new();
    for key in keys {
        let next = counts.len();
        let slot = *index.entry(key).or_insert(next);
        if slot == counts.len() {
            counts.push(0);
        }
        counts[slot] += 1;
    }
    let dist = Distribution::from_counts(&counts).expect("at least one player");
    shannon_entropy(&dist)
}

/// Simple social entropy of the partition by distinct home position.
pub fn positional_entropy(team: &TeamConfig) -> EntropyValue {
    entropy_of_classes(
        team.players()
            .iter()
            .map(|p| (p.role.home.0.to_bits(), p.role.home.1.to_bits())),
    )
}

/// Simple social entropy over offensiveness clusters (exact-value
/// grouping). A goalie whose setting differs from every field cluster
/// forms its own cluster.
pub fn trait_entropy(team: &TeamConfig) -> EntropyValue {
    entropy_of_classes(team.players().iter().map(|p| p.traits.offensiveness.to_bits()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtin(name: &str) -> TeamConfig {
        builtin_team(name).unwrap()
    }

    #[test]
    fn roster_shapes_match_the_published_table() {
        let teams = builtin_teams();
        assert_eq!(teams.len(), 6);
        assert_eq!(builtin("Kids0").players().len(), 11);
        assert_eq!(builtin("Agr").players().len(), 12);
        assert_eq!(builtin("Kids2").players().len(), 11);
        assert_eq!(builtin("Kids1").players().len(), 11);
        assert_eq!(builtin("Kids3").players().len(), 11);
        assert_eq!(builtin("Control").players().len(), 11);
    }

    #[test]
    fn kids0_has_two_position_classes() {
        let team = builtin("Kids0");
        let homes: std::collections::HashSet<_> = team
            .players()
            .iter()
            .map(|p| (p.role.home.0.to_bits(), p.role.home.1.to_bits()))
            .collect();
        assert_eq!(homes.len(), 2);
    }

    #[test]
    fn agr_field_players_form_one_trait_cluster() {
        let team = builtin("Agr");
        assert!(team
            .players()
            .iter()
            .filter(|p| p.role.name != RoleName::Goalie)
            .all(|p| p.traits.offensiveness == 0.99));
    }

    #[test]
    fn control_trait_clusters() {
        let team = builtin("Control");
        let mut values: Vec<f64> = team
            .players()
            .iter()
            .map(|p| p.traits.offensiveness)
            .collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        assert_eq!(values, vec![0.0, 0.3, 0.6, 0.9]);
    }

    #[test]
    fn positional_entropies_match_published_values() {
        let cases = [
            ("Kids0", 0.439497),
            ("Agr", 1.18872),
            ("Kids2", 1.3485879),
            ("Kids3", 3.459432),
            ("Control", 3.459432),
            ("Kids1", 3.459432),
        ];
        for (name, expected) in cases {
            let h = positional_entropy(&builtin(name)).bits();
            assert!(
                (h - expected).abs() < 1e-4,
                "{name}: positional entropy {h}, expected {expected}"
            );
        }
    }

    #[test]
    fn trait_entropies_match_published_values() {
        for name in ["Kids0", "Agr", "Kids3", "Kids1"] {
            assert_eq!(trait_entropy(&builtin(name)).bits(), 0.0, "{name}");
        }
        let kids2 = trait_entropy(&builtin("Kids2")).bits();
        assert!((kids2 - 1.3485879).abs() < 1e-4, "Kids2: {kids2}");
        let control = trait_entropy(&builtin("Control")).bits();
        assert!((control - 1.8676).abs() < 1e-3, "Control: {control}");
    }

    #[test]
    fn goalie_uniqueness_enforced() {
        let mut players = builtin("Kids1").players().to_vec();
        players[1].role = Role::new(RoleName::Goalie);
        assert!(matches!(
            TeamConfig::new("TwoKeepers", players),
            Err(Error::InvalidTeamConfig(_))
        ));
        let one = vec![PlayerConfig {
            id: AgentId::new("solo"),
            role: Role::new(RoleName::CenterForward),
            traits: TraitProfile::new(0.5).unwrap(),
        }];
        assert!(TeamConfig::new("NoKeeper", one).is_err());
    }

    #[test]
    fn unknown_builtin_is_an_error() {
        assert!(matches!(builtin_team("Kids9"), Err(Error::UnknownTeam(_))));
    }

    #[test]
    fn team_json_round_trip() {
        let team = builtin("Kids2");
        let text = team.to_json_string();
        let parsed = TeamConfig::from_json_str(&text).unwrap();
        assert_eq!(team, parsed);

        // Omitted home positions fall back to the canonical constants.
        let minimal = r#"{
            "name": "Tiny",
            "players": [
                {"id": "g", "role": {"name": "goalie"}, "traits": {"offensiveness": 0.0}},
                {"id": "f", "role": {"name": "center_forward"}, "traits": {"offensiveness": 0.9}}
            ]
        }"#;
        let tiny = TeamConfig::from_json_str(minimal).unwrap();
        assert_eq!(tiny.players()[1].role.home, RoleName::CenterForward.canonical_home());

        let bad = minimal.replace("0.9", "1.7");
        assert!(TeamConfig::from_json_str(&bad).is_err());
    }
}
