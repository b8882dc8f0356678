//! Diversity analysis for multi-agent societies.
//!
//! The crate has three layers:
//!
//! * **Metrics** — social entropy over categorical class memberships
//!   ([`entropy`]), hierarchic social entropy over continuous feature
//!   spaces ([`taxonomy`]), and pairwise behavioral difference of
//!   policy tables ([`behavior`]). All of them consume the agent
//!   society model in [`society`].
//! * **Dynamics** — a linear second-order model of how a team's
//!   diversity index moves over time under a diversifying force,
//!   with closed-form solutions for the free/damped/forced regimes
//!   and an independent Runge–Kutta oracle ([`dynamics`]).
//! * **Simulation** — a deterministic situated-automaton team
//!   simulator with built-in team fixtures, malfunction scenarios,
//!   and an experiment harness producing entropy/score reports
//!   ([`sim`]).
//!
//! All types are immutable values after construction and all
//! computations are deterministic; anything seeded uses an explicit,
//! documented pseudo-random generator so that outputs are
//! reproducible byte for byte.

pub mod behavior;
pub mod dynamics;
pub mod entropy;
mod error;
pub mod fmt;
pub mod sim;
pub mod society;
pub mod taxonomy;

pub use error::{Error, Result};
