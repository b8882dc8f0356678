//! Second-order dynamics of a team's diversity index.
//!
//! The model treats the net effect of all diversity drivers as a
//! *diversifying force* `F(t)` acting on the index `D(t)`:
//!
//! ```text
//! F(t) = M·D'' + R·D' + E·D
//! ```
//!
//! with inertia `M` (resistance to accelerating change), resistance
//! `R` (damping of rapid adaptation), and resilience `E` (restoring
//! pull back toward the pre-event level). `D` is the displacement of
//! the diversity index around an operating point, so trajectories may
//! go negative even though raw entropies cannot.
//!
//! The solvers ([`solve_free_undamped`], [`solve_free_damped`],
//! [`solve_forced`], [`solve_scenario`]) return closed forms for the
//! free, damped, forced, and resonant regimes; [`rk4_integrate`] is an
//! independent Runge–Kutta oracle used to validate them; and
//! [`detect_beats`], [`resonance_scan`], and [`step_response`] analyze
//! the resulting motion.

mod analysis;
mod oracle;
mod solution;
mod solve;

pub use analysis::{
    detect_beats, resonance_scan, steady_state_amplitude, steady_state_phase_lag, step_response,
    BeatReport, ForceComponents, ResonanceScan, StepReport,
};
pub use oracle::{rk4_integrate, simulate_forcing};
pub use solution::{ClosedForm, PointDerivs};
pub use solve::{
    solve_forced, solve_free_damped, solve_free_undamped, solve_scenario, ForcedSolution,
    FreeSolution, Scenario, ScenarioSolution,
};

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative tolerance under which `R² − 4ME` counts as zero
/// (critical damping) and a forcing frequency counts as resonant.
pub const REGIME_TOLERANCE: f64 = 1e-12;

/// The `(M, R, E)` coefficients of the diversity vibration equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct VibrationParams {
    mass: f64,
    resistance: f64,
    resilience: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    #[serde(rename = "M")]
    m: f64,
    #[serde(rename = "R")]
    r: f64,
    #[serde(rename = "E")]
    e: f64,
}

impl TryFrom<RawParams> for VibrationParams {
    type Error = String;

    fn try_from(raw: RawParams) -> std::result::Result<Self, String> {
        VibrationParams::new(raw.m, raw.r, raw.e).map_err(|e| e.to_string())
    }
}

impl From<VibrationParams> for RawParams {
    fn from(p: VibrationParams) -> RawParams {
        RawParams {
            m: p.mass,
            r: p.resistance,
            e: p.resilience,
        }
    }
}

impl VibrationParams {
    /// Requires `M > 0`, `E > 0`, `R >= 0`, all finite.
    pub fn new(mass: f64, resistance: f64, resilience: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParams(format!("mass M must be > 0, got {mass}")));
        }
        if !(resilience.is_finite() && resilience > 0.0) {
            return Err(Error::InvalidParams(format!(
                "resilience E must be > 0, got {resilience}"
            )));
        }
        if !(resistance.is_finite() && resistance >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "resistance R must be >= 0, got {resistance}"
            )));
        }
        Ok(VibrationParams {
            mass,
            resistance,
            resilience,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn resistance(&self) -> f64 {
        self.resistance
    }

    pub fn resilience(&self) -> f64 {
        self.resilience
    }

    pub fn is_damped(&self) -> bool {
        self.resistance > 0.0
    }

    /// `R² − 4ME`: positive for overdamped, zero for critically
    /// damped, negative for underdamped motion.
    pub fn discriminant(&self) -> f64 {
        self.resistance * self.resistance - 4.0 * self.mass * self.resilience
    }

    /// Acceleration `D'' = (F − R·D' − E·D) / M`.
    pub fn acceleration(&self, d: f64, v: f64, force: f64) -> f64 {
        (force - self.resistance * v - self.resilience * d) / self.mass
    }
}

/// Natural circular frequency `ω0 = sqrt(E/M)`.
pub fn natural_frequency(params: &VibrationParams) -> f64 {
    (params.resilience() / params.mass()).sqrt()
}

/// Natural period `T = 2π/ω0` of the undamped free motion.
pub fn natural_period(params: &VibrationParams) -> f64 {
    2.0 * std::f64::consts::PI / natural_frequency(params)
}

/// Diversity at `t = 0` and diversification speed `D'(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConditions {
    #[serde(rename = "D0")]
    pub d0: f64,
    #[serde(rename = "V0")]
    pub v0: f64,
}

impl InitialConditions {
    pub fn new(d0: f64, v0: f64) -> Self {
        InitialConditions { d0, v0 }
    }

    pub fn at_rest() -> Self {
        InitialConditions { d0: 0.0, v0: 0.0 }
    }
}

/// One named term of the diversifying force. Labels are free-form;
/// they usually name the driver the term models (role assignment,
/// imitation, norms, ...) and are carried as metadata only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ForcingTerm {
    /// `amplitude · cos(omega·t + phase)`
    Sinusoid {
        label: String,
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Constant force `level` for all `t >= 0`.
    Constant { label: String, level: f64 },
    /// Instantaneous kick at `t = at`: the speed `D'` jumps by
    /// `magnitude / M`. Applied at the nearest sample of the
    /// integration grid.
    Impulse { label: String, magnitude: f64, at: f64 },
}

/// The applied diversifying force: a sum of named terms.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Forcing {
    pub terms: Vec<ForcingTerm>,
}

impl Forcing {
    pub fn none() -> Self {
        Forcing::default()
    }

    pub fn single_sinusoid(label: &str, amplitude: f64, omega: f64, phase: f64) -> Self {
        Forcing {
            terms: vec![ForcingTerm::Sinusoid {
                label: label.to_owned(),
                amplitude,
                omega,
                phase,
            }],
        }
    }

    pub fn constant(label: &str, level: f64) -> Self {
        Forcing {
            terms: vec![ForcingTerm::Constant {
                label: label.to_owned(),
                level,
            }],
        }
    }

    /// Check every term for finite, usable values.
    pub fn validate(&self) -> Result<()> {
        for (i, term) in self.terms.iter().enumerate() {
            let bad = |what: &str| {
                Err(Error::InvalidParams(format!(
                    "forcing term {i}: {what} must be finite"
                )))
            };
            match term {
                ForcingTerm::Sinusoid {
                    amplitude,
                    omega,
                    phase,
                    ..
                } => {
                    if !(amplitude.is_finite() && phase.is_finite()) {
                        return bad("amplitude and phase");
                    }
                    if !(omega.is_finite() && *omega > 0.0) {
                        return Err(Error::InvalidParams(format!(
                            "forcing term {i}: sinusoid frequency must be > 0, got {omega}"
                        )));
                    }
                }
                ForcingTerm::Constant { level, .. } => {
                    if !level.is_finite() {
                        return bad("level");
                    }
                }
                ForcingTerm::Impulse { magnitude, at, .. } => {
                    if !magnitude.is_finite() {
                        return bad("magnitude");
                    }
                    if !(at.is_finite() && *at >= 0.0) {
                        return Err(Error::InvalidParams(format!(
                            "forcing term {i}: impulse time must be >= 0, got {at}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The continuous part of the force at time `t` (impulses are
    /// distributional and excluded here).
    pub fn continuous_at(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| match term {
                ForcingTerm::Sinusoid {
                    amplitude,
                    omega,
                    phase,
                    ..
                } => amplitude * (omega * t + phase).cos(),
                ForcingTerm::Constant { level, .. } => *level,
                ForcingTerm::Impulse { .. } => 0.0,
            })
            .sum()
    }

    pub fn impulses(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.terms.iter().filter_map(|term| match term {
            ForcingTerm::Impulse { magnitude, at, .. } => Some((*at, *magnitude)),
            _ => None,
        })
    }

    pub fn has_impulses(&self) -> bool {
        self.impulses().next().is_some()
    }

    pub fn sinusoids(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.terms.iter().filter_map(|term| match term {
            ForcingTerm::Sinusoid {
                amplitude,
                omega,
                phase,
                ..
            } => Some((*amplitude, *omega, *phase)),
            _ => None,
        })
    }
}

/// Vibration regime of a parameter/forcing combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    UndampedFree,
    Overdamped,
    CriticallyDamped,
    Underdamped,
    ForcedUndamped,
    ForcedDamped,
}

/// Regime classification plus the quantities that characterize it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    /// `ω0 = sqrt(E/M)`.
    pub natural_frequency: f64,
    /// `2π / μ` with `μ = sqrt(4ME − R²) / 2M`; only the underdamped
    /// motion has one.
    pub quasiperiod: Option<f64>,
    /// Real characteristic roots `(g, h)`, slow root first; `None`
    /// when the roots are complex (underdamped / undamped).
    pub roots: Option<(f64, f64)>,
}

/// Classify by the sign of `R² − 4ME` (free) or by the presence of a
/// sinusoidal force (forced). `|R² − 4ME| <= REGIME_TOLERANCE ·
/// max(R², 4ME)` counts as critically damped.
pub fn classify_regime(params: &VibrationParams, forcing: Option<&Forcing>) -> RegimeReport {
    let omega0 = natural_frequency(params);
    let m = params.mass();
    let r = params.resistance();
    let disc = params.discriminant();
    let critical_band = REGIME_TOLERANCE * (r * r).max(4.0 * m * params.resilience());

    let forced = forcing.is_some_and(|f| f.sinusoids().any(|(amp, ..)| amp != 0.0));
    let damped_kind = if disc.abs() <= critical_band {
        Regime::CriticallyDamped
    } else if disc > 0.0 {
        Regime::Overdamped
    } else {
        Regime::Underdamped
    };

    let regime = match (forced, params.is_damped()) {
        (false, false) => Regime::UndampedFree,
        (false, true) => damped_kind,
        (true, false) => Regime::ForcedUndamped,
        (true, true) => Regime::ForcedDamped,
    };

    let (quasiperiod, roots) = if !params.is_damped() {
        (None, None)
    } else {
        match damped_kind {
            Regime::Overdamped => {
                let sq = disc.sqrt();
                let slow = (-r + sq) / (2.0 * m);
                let fast = (-r - sq) / (2.0 * m);
                (None, Some((slow, fast)))
            }
            Regime::CriticallyDamped => {
                let rho = -r / (2.0 * m);
                (None, Some((rho, rho)))
            }
            _ => {
                let mu = (-disc).sqrt() / (2.0 * m);
                (Some(2.0 * std::f64::consts::PI / mu), None)
            }
        }
    };

    RegimeReport {
        regime,
        natural_frequency: omega0,
        quasiperiod,
        roots,
    }
}

/// Which solver produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    ClosedForm,
    RungeKutta4,
}

/// One sampled point of a diversity trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub d: f64,
    pub v: f64,
}

/// A sampled `D(t)` series with strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub regime: Regime,
    pub solver: Solver,
}

impl Trajectory {
    pub fn max_abs_d(&self) -> f64 {
        self.samples.iter().map(|s| s.d.abs()).fold(0.0, f64::max)
    }

    /// Largest pointwise |D| difference against another trajectory
    /// sampled on the same grid.
    pub fn max_abs_deviation(&self, other: &Trajectory) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a.d - b.d).abs())
            .fold(0.0, f64::max)
    }

    /// CSV rows `t,D,D_prime,F` with the applied continuous force.
    pub fn write_csv(&self, mut w: impl Write, forcing: &Forcing) -> std::io::Result<()> {
        writeln!(w, "t,D,D_prime,F")?;
        for s in &self.samples {
            writeln!(
                w,
                "{},{},{},{}",
                crate::fmt::sig9(s.t),
                crate::fmt::sig9(s.d),
                crate::fmt::sig9(s.v),
                crate::fmt::sig9(forcing.continuous_at(s.t)),
            )?;
        }
        Ok(())
    }
}

/// Uniform sampling grid for trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleGrid {
    pub dt: f64,
    pub t_end: f64,
}

impl SampleGrid {
    pub fn new(dt: f64, t_end: f64) -> Result<Self> {
        let grid = SampleGrid { dt, t_end };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidGrid(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "t_end must be > 0, got {}",
                self.t_end
            )));
        }
        Ok(())
    }

    /// Number of steps; `t_end` is rounded to a whole number of steps.
    pub fn steps(&self) -> usize {
        ((self.t_end / self.dt).round() as usize).max(1)
    }

    pub fn time_at(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }
}

/// The three force components at one trajectory point, recovered from
/// `(D, D', F)`: inertial `M·D''`, resistive `R·D'`, restoring `E·D`.
/// Their sum reproduces the applied force.
pub fn force_components(
    params: &VibrationParams,
    d: f64,
    v: f64,
    applied: f64,
) -> ForceComponents {
    let accel = params.acceleration(d, v, applied);
    ForceComponents {
        inertial: params.mass() * accel,
        resistive: params.resistance() * v,
        restoring: params.resilience() * d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_frequency_examples() {
        let p = VibrationParams::new(1.0, 0.0, 1.0).unwrap();
        assert_eq!(natural_frequency(&p), 1.0);
        let p = VibrationParams::new(1.0, 0.0, 4.0).unwrap();
        assert_eq!(natural_frequency(&p), 2.0);
        // T = 2π/ω0
        assert!((natural_period(&p) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(VibrationParams::new(0.0, 0.0, 1.0).is_err());
        assert!(VibrationParams::new(1.0, -0.5, 1.0).is_err());
        assert!(VibrationParams::new(1.0, 0.0, 0.0).is_err());
        assert!(VibrationParams::new(f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn regime_classification_examples() {
        let undamped = VibrationParams::new(1.0, 0.0, 1.0).unwrap();
        assert_eq!(
            classify_regime(&undamped, None).regime,
            Regime::UndampedFree
        );

        let critical = VibrationParams::new(1.0, 2.0, 1.0).unwrap();
        let report = classify_regime(&critical, None);
        assert_eq!(report.regime, Regime::CriticallyDamped);
        assert_eq!(report.roots, Some((-1.0, -1.0)));

        let over = VibrationParams::new(1.0, 3.0, 1.0).unwrap();
        let report = classify_regime(&over, None);
        assert_eq!(report.regime, Regime::Overdamped);
        let (slow, fast) = report.roots.unwrap();
        assert!(slow > fast && fast < 0.0 && slow < 0.0);

        let under = VibrationParams::new(1.0, 0.5, 1.0).unwrap();
        let report = classify_regime(&under, None);
        assert_eq!(report.regime, Regime::Underdamped);
        assert!(report.quasiperiod.unwrap() > natural_period(&under));
    }

    #[test]
    fn forced_regimes() {
        let forcing = Forcing::single_sinusoid("drv", 1.0, 0.5, 0.0);
        let undamped = VibrationParams::new(1.0, 0.0, 1.0).unwrap();
        let damped = VibrationParams::new(1.0, 0.5, 1.0).unwrap();
        assert_eq!(
            classify_regime(&undamped, Some(&forcing)).regime,
            Regime::ForcedUndamped
        );
        assert_eq!(
            classify_regime(&damped, Some(&forcing)).regime,
            Regime::ForcedDamped
        );
        // A constant force alone does not make the motion "forced".
        let constant = Forcing::constant("norms", 0.4);
        assert_eq!(
            classify_regime(&undamped, Some(&constant)).regime,
            Regime::UndampedFree
        );
    }

    #[test]
    fn force_components_equilibrium() {
        let p = VibrationParams::new(2.0, 0.5, 3.0).unwrap();
        let c = force_components(&p, 0.0, 0.0, 0.0);
        assert_eq!(c.inertial, 0.0);
        assert_eq!(c.resistive, 0.0);
        assert_eq!(c.restoring, 0.0);
        assert_eq!(c.total(), 0.0);
    }

    #[test]
    fn forcing_evaluation() {
        let forcing = Forcing {
            terms: vec![
                ForcingTerm::Sinusoid {
                    label: "roles".into(),
                    amplitude: 2.0,
                    omega: 1.0,
                    phase: 0.0,
                },
                ForcingTerm::Constant {
                    label: "norms".into(),
                    level: 0.5,
                },
                ForcingTerm::Impulse {
                    label: "fault".into(),
                    magnitude: -1.0,
                    at: 3.0,
                },
            ],
        };
        assert!((forcing.continuous_at(0.0) - 2.5).abs() < 1e-15);
        assert_eq!(forcing.impulses().collect::<Vec<_>>(), vec![(3.0, -1.0)]);
    }

    #[test]
    fn forcing_validation() {
        let ok = Forcing::single_sinusoid("drv", 1.0, 0.5, 0.0);
        assert!(ok.validate().is_ok());
        let zero_omega = Forcing::single_sinusoid("drv", 1.0, 0.0, 0.0);
        assert!(zero_omega.validate().is_err());
        let nan_level = Forcing::constant("c", f64::NAN);
        assert!(nan_level.validate().is_err());
        let negative_time = Forcing {
            terms: vec![ForcingTerm::Impulse {
                label: "kick".into(),
                magnitude: 1.0,
                at: -1.0,
            }],
        };
        assert!(negative_time.validate().is_err());
    }

    #[test]
    fn scenario_json_shape() {
        let text = r#"{
            "params": {"M": 1.0, "R": 0.5, "E": 2.0},
            "init": {"D0": 0.1, "V0": 0.0},
            "forcing": [{"type": "sinusoid", "label": "imitation", "amplitude": 1.0, "omega": 0.8}],
            "grid": {"dt": 0.001, "t_end": 20.0}
        }"#;
        let scenario: Scenario = serde_json::from_str(text).unwrap();
        assert_eq!(scenario.params.resistance(), 0.5);
        assert_eq!(scenario.grid.steps(), 20_000);

        let invalid = text.replace("\"M\": 1.0", "\"M\": -1.0");
        assert!(serde_json::from_str::<Scenario>(&invalid).is_err());
    }
}
