use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by society validation, metric computation, the
/// dynamics solvers, and the team simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("duplicate agent id `{0}`")]
    DuplicateAgentId(String),

    #[error("agent `{agent}`: expected {expected} features, found {found}")]
    FeatureLengthMismatch {
        agent: String,
        expected: usize,
        found: usize,
    },

    #[error("agent `{0}`: feature values must be finite")]
    NonFiniteFeature(String),

    #[error("agent `{agent}`: attribute set differs from the society schema ({detail})")]
    AttributeSchemaMismatch { agent: String, detail: String },

    #[error("society has no agents")]
    EmptySociety,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("feature dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("society declares no feature dimensions")]
    ZeroDimensions,

    #[error("invalid distance matrix: {0}")]
    InvalidDistanceMatrix(String),

    #[error("no dimensions named for the diversity index")]
    EmptyDimensionList,

    #[error("sub-societies do not share a schema: {0}")]
    SchemaMismatch(String),

    #[error("unknown state id `{0}`")]
    UnknownState(String),

    #[error("no perceptual states defined for either policy table")]
    EmptyStateSet,

    #[error("agent `{0}` has zero recorded visits")]
    ZeroVisits(String),

    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),

    #[error("need at least 2 policy tables, got {0}")]
    TooFewTables(usize),

    #[error("unknown agent `{0}`")]
    UnknownAgent(String),

    #[error("empty tick window")]
    EmptyWindow,

    #[error("invalid vibration parameters: {0}")]
    InvalidParams(String),

    #[error("wrong regime: {0}")]
    WrongRegime(String),

    #[error("integration state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("invalid sample grid: {0}")]
    InvalidGrid(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("steady amplitudes are unbounded at resonance when resistance is zero")]
    UnboundedResonance,

    #[error("unknown team `{0}`")]
    UnknownTeam(String),

    #[error("invalid team config: {0}")]
    InvalidTeamConfig(String),

    #[error("invalid automaton spec: {0}")]
    InvalidAutomaton(String),

    #[error("invalid simulation request: {0}")]
    InvalidSimRequest(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
