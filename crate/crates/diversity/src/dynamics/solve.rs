//! Closed-form solvers for the free, damped, forced, and resonant
//! regimes of the vibration equation.

use serde::{Deserialize, Serialize};

use super::oracle::simulate_forcing;
use super::solution::ClosedForm;
use super::{
    classify_regime, natural_frequency, Forcing, InitialConditions, RegimeReport, SampleGrid,
    Trajectory, VibrationParams, REGIME_TOLERANCE,
};
use crate::{Error, Result};

/// Closed-form free vibration: `M D'' + R D' + E D = 0`.
#[derive(Debug, Clone)]
pub struct FreeSolution {
    pub form: ClosedForm,
    pub report: RegimeReport,
    /// Amplitude `r = sqrt(A² + B²)` of the undamped phase form
    /// `D = r·cos(ω0 t − δ)`; `None` when damped.
    pub amplitude: Option<f64>,
    /// Phase angle `δ` from `tan δ = B/A`, resolved to the correct
    /// quadrant with a two-argument arctangent; `None` when damped.
    pub phase: Option<f64>,
}

impl FreeSolution {
    pub fn sample(&self, grid: &SampleGrid) -> Result<Trajectory> {
        grid.validate()?;
        Ok(self.form.sample(grid, self.report.regime))
    }
}

/// Undamped free motion `D = A cos(ω0 t) + B sin(ω0 t)` with
/// `A = D0`, `B = V0/ω0`. Errors unless `R = 0`.
pub fn solve_free_undamped(
    params: &VibrationParams,
    init: &InitialConditions,
) -> Result<FreeSolution> {
    if params.is_damped() {
        return Err(Error::WrongRegime(format!(
            "free undamped solution requires R = 0, got R = {}",
            params.resistance()
        )));
    }
    let omega0 = natural_frequency(params);
    let a = init.d0;
    let b = init.v0 / omega0;
    Ok(FreeSolution {
        form: ClosedForm::ExpTrig {
            lambda: 0.0,
            mu: omega0,
            a,
            b,
        },
        report: classify_regime(params, None),
        amplitude: Some((a * a + b * b).sqrt()),
        phase: Some(b.atan2(a)),
    })
}

/// Homogeneous solution for damped parameters, fitted to the given
/// initial conditions. Shared by the free solver and the transient
/// part of the forced solver.
fn damped_homogeneous(params: &VibrationParams, d0: f64, v0: f64) -> ClosedForm {
    let m = params.mass();
    let r = params.resistance();
    let disc = params.discriminant();
    let critical_band = REGIME_TOLERANCE * (r * r).max(4.0 * m * params.resilience());

    if disc.abs() <= critical_band {
        let rho = -r / (2.0 * m);
        ClosedForm::RepeatedRoot {
            rho,
            c1: d0,
            c2: v0 - rho * d0,
        }
    } else if disc > 0.0 {
        let sq = disc.sqrt();
        let g = (-r + sq) / (2.0 * m); // slow root
        let h = (-r - sq) / (2.0 * m); // fast root
        ClosedForm::TwoExp {
            g,
            h,
            c1: (v0 - h * d0) / (g - h),
            c2: (g * d0 - v0) / (g - h),
        }
    } else {
        let lambda = -r / (2.0 * m);
        let mu = (-disc).sqrt() / (2.0 * m);
        ClosedForm::ExpTrig {
            lambda,
            mu,
            a: d0,
            b: (v0 - lambda * d0) / mu,
        }
    }
}

/// Damped free motion, with the closed form selected by the sign of
/// `R² − 4ME`. Errors unless `R > 0`.
pub fn solve_free_damped(
    params: &VibrationParams,
    init: &InitialConditions,
) -> Result<FreeSolution> {
    if !params.is_damped() {
        return Err(Error::WrongRegime(
            "free damped solution requires R > 0".into(),
        ));
    }
    Ok(FreeSolution {
        form: damped_homogeneous(params, init.d0, init.v0),
        report: classify_regime(params, None),
        amplitude: None,
        phase: None,
    })
}

/// Closed-form response to a single sinusoidal force: the decaying
/// (or, when undamped, persistent) `transient` part plus the
/// sustained `steady` part, `D = D_t + D_s`.
#[derive(Debug, Clone)]
pub struct ForcedSolution {
    pub transient: ClosedForm,
    pub steady: ClosedForm,
    pub report: RegimeReport,
    /// `F0 / sqrt(M²(ω0² − ω²)² + R²ω²)` — |steady| amplitude; for
    /// the resonant undamped case this is the secular growth rate
    /// `F0 / (2Mω0)` instead.
    pub steady_amplitude: f64,
    /// Phase lag `δ` of the steady displacement behind the force.
    pub phase_lag: f64,
    /// Set when the motion is the unbounded `ω = ω0`, `R = 0` case.
    pub unbounded: bool,
}

impl ForcedSolution {
    pub fn total(&self) -> ClosedForm {
        self.transient.clone().plus(self.steady.clone())
    }

    pub fn sample(&self, grid: &SampleGrid) -> Result<Trajectory> {
        grid.validate()?;
        Ok(self.total().sample(grid, self.report.regime))
    }
}

/// Particular (steady) solution for `F0·cos(ωt + φ)` plus its
/// amplitude and phase lag. Requires handling of the resonant
/// undamped case by the caller.
fn steady_part(
    params: &VibrationParams,
    amplitude: f64,
    omega: f64,
    phase: f64,
) -> (ClosedForm, f64, f64) {
    let m = params.mass();
    let r = params.resistance();
    let omega0 = natural_frequency(params);
    let restoring = m * (omega0 * omega0 - omega * omega);
    let damping = r * omega;
    let denom = (restoring * restoring + damping * damping).sqrt();
    let delta = damping.atan2(restoring);
    let coefficient = amplitude / denom;
    (
        ClosedForm::Cosine {
            coefficient,
            omega,
            theta: phase - delta,
        },
        coefficient.abs(),
        delta,
    )
}

fn is_resonant(params: &VibrationParams, omega: f64) -> bool {
    let omega0 = natural_frequency(params);
    (omega - omega0).abs() <= REGIME_TOLERANCE * omega0
}

/// Solve `M D'' + R D' + E D = F0·cos(ωt + φ)` for the given initial
/// conditions.
///
/// * `R > 0`: steady state `D_s = F0·cos(ωt + φ − δ) / sqrt(M²(ω0² −
///   ω²)² + R²ω²)` plus a transient from the characteristic roots that
///   dies out.
/// * `R = 0`, `ω ≠ ω0`: bounded particular solution in phase (or in
///   anti-phase above resonance) with the force; the homogeneous part
///   persists.
/// * `R = 0`, `ω = ω0`: the secular solution `(F0/2Mω0)·t·sin(ω0 t +
///   φ)` — the motion grows without bound.
pub fn solve_forced(
    params: &VibrationParams,
    amplitude: f64,
    omega: f64,
    phase: f64,
    init: &InitialConditions,
) -> Result<ForcedSolution> {
    if !(amplitude.is_finite() && omega.is_finite() && phase.is_finite()) {
        return Err(Error::InvalidParams(
            "forcing amplitude, frequency, and phase must be finite".into(),
        ));
    }
    if omega <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "forcing frequency must be > 0, got {omega}"
        )));
    }
    let forcing = Forcing::single_sinusoid("forcing", amplitude, omega, phase);
    let report = classify_regime(params, Some(&forcing));
    let omega0 = natural_frequency(params);

    let (steady, steady_amplitude, phase_lag, unbounded) =
        if !params.is_damped() && is_resonant(params, omega) {
            let coefficient = amplitude / (2.0 * params.mass() * omega0);
            (
                ClosedForm::Secular {
                    coefficient,
                    omega: omega0,
                    theta: phase,
                },
                coefficient.abs(),
                std::f64::consts::FRAC_PI_2,
                true,
            )
        } else {
            let (form, amp, delta) = steady_part(params, amplitude, omega, phase);
            (form, amp, delta, false)
        };

    // Fit the homogeneous part to the initial conditions left over
    // after subtracting the particular solution at t = 0.
    let at_zero = steady.eval(0.0);
    let d0 = init.d0 - at_zero.d;
    let v0 = init.v0 - at_zero.v;
    let transient = if params.is_damped() {
        damped_homogeneous(params, d0, v0)
    } else {
        ClosedForm::ExpTrig {
            lambda: 0.0,
            mu: omega0,
            a: d0,
            b: v0 / omega0,
        }
    };

    Ok(ForcedSolution {
        transient,
        steady,
        report,
        steady_amplitude,
        phase_lag,
        unbounded,
    })
}

/// A dynamics run description: parameters, initial conditions,
/// forcing terms, and the sampling grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub params: VibrationParams,
    pub init: InitialConditions,
    #[serde(default)]
    pub forcing: Forcing,
    pub grid: SampleGrid,
}

impl Scenario {
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

/// A solved scenario: the trajectory, its regime report, the closed
/// form when one exists (impulses force the numeric path), and the
/// unbounded-resonance flag.
#[derive(Debug, Clone)]
pub struct ScenarioSolution {
    pub report: RegimeReport,
    pub trajectory: Trajectory,
    pub closed_form: Option<ClosedForm>,
    pub unbounded_resonance: bool,
}

/// Solve a scenario, preferring the closed form.
///
/// Sinusoid and constant terms superpose: each contributes its
/// particular solution, and one homogeneous part absorbs the initial
/// conditions. Scenarios with impulse terms integrate numerically.
pub fn solve_scenario(scenario: &Scenario) -> Result<ScenarioSolution> {
    scenario.grid.validate()?;
    scenario.forcing.validate()?;
    let params = &scenario.params;
    let report = classify_regime(params, Some(&scenario.forcing));
    let omega0 = natural_frequency(params);

    if scenario.forcing.has_impulses() {
        let trajectory = simulate_forcing(
            params,
            &scenario.forcing,
            &scenario.init,
            scenario.grid.dt,
            scenario.grid.t_end,
        )?;
        let unbounded = !params.is_damped()
            && scenario
                .forcing
                .sinusoids()
                .any(|(amp, omega, _)| amp != 0.0 && is_resonant(params, omega));
        return Ok(ScenarioSolution {
            report,
            trajectory: Trajectory {
                regime: report.regime,
                ..trajectory
            },
            closed_form: None,
            unbounded_resonance: unbounded,
        });
    }

    // Particular solutions of all continuous terms superpose.
    let mut particular: Vec<ClosedForm> = Vec::new();
    let mut unbounded = false;
    for term in &scenario.forcing.terms {
        match term {
            super::ForcingTerm::Constant { level, .. } => {
                particular.push(ClosedForm::Constant {
                    level: level / params.resilience(),
                });
            }
            super::ForcingTerm::Sinusoid {
                amplitude,
                omega,
                phase,
                ..
            } => {
                if *amplitude == 0.0 {
                    continue;
                }
                if !params.is_damped() && is_resonant(params, *omega) {
                    unbounded = true;
                    particular.push(ClosedForm::Secular {
                        coefficient: amplitude / (2.0 * params.mass() * omega0),
                        omega: omega0,
                        theta: *phase,
                    });
                } else {
                    let (form, _, _) = steady_part(params, *amplitude, *omega, *phase);
                    particular.push(form);
                }
            }
            super::ForcingTerm::Impulse { .. } => unreachable!("handled above"),
        }
    }
    let particular = ClosedForm::Sum(particular);
    let at_zero = particular.eval(0.0);
    let d0 = scenario.init.d0 - at_zero.d;
    let v0 = scenario.init.v0 - at_zero.v;
    let homogeneous = if params.is_damped() {
        damped_homogeneous(params, d0, v0)
    } else {
        ClosedForm::ExpTrig {
            lambda: 0.0,
            mu: omega0,
            a: d0,
            b: v0 / omega0,
        }
    };
    let total = homogeneous.plus(particular);
    let trajectory = total.sample(&scenario.grid, report.regime);

    Ok(ScenarioSolution {
        report,
        trajectory,
        closed_form: Some(total),
        unbounded_resonance: unbounded,
    })
}

#[cfg(test)]
mod tests {
    use super::super::oracle::rk4_integrate;
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    fn params(m: f64, r: f64, e: f64) -> VibrationParams {
        VibrationParams::new(m, r, e).unwrap()
    }

    #[test]
    fn undamped_cosine() {
        let p = params(1.0, 0.0, 1.0);
        let init = InitialConditions::new(1.0, 0.0);
        let sol = solve_free_undamped(&p, &init).unwrap();
        assert_eq!(sol.amplitude, Some(1.0));
        assert_eq!(sol.phase, Some(0.0));
        assert!((sol.form.value(PI) - (-1.0)).abs() < 1e-12);
        // Periodicity: D(T) = D(0).
        let t = 2.0 * PI;
        assert!((sol.form.value(t) - sol.form.value(0.0)).abs() < 1e-9);
    }

    #[test]
    fn phase_angle_resolves_the_quadrant() {
        // A = -1, B = 0: tan δ = 0 alone would give δ = 0, but the
        // motion starts at -1, so δ = π.
        let p = params(1.0, 0.0, 1.0);
        let sol = solve_free_undamped(&p, &InitialConditions::new(-1.0, 0.0)).unwrap();
        assert!((sol.phase.unwrap() - PI).abs() < 1e-15);
        assert_eq!(sol.amplitude, Some(1.0));
        // r·cos(ω0·t − δ) reproduces the solution.
        let (r, delta) = (sol.amplitude.unwrap(), sol.phase.unwrap());
        for k in 0..50 {
            let t = k as f64 * 0.13;
            let phase_form = r * (t - delta).cos();
            assert!((phase_form - sol.form.value(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn undamped_equilibrium_stays_zero() {
        let p = params(2.0, 0.0, 3.0);
        let sol = solve_free_undamped(&p, &InitialConditions::at_rest()).unwrap();
        for k in 0..100 {
            assert_eq!(sol.form.value(k as f64 * 0.1), 0.0);
        }
    }

    #[test]
    fn undamped_rejects_damping() {
        let p = params(1.0, 0.5, 1.0);
        assert!(matches!(
            solve_free_undamped(&p, &InitialConditions::at_rest()),
            Err(Error::WrongRegime(_))
        ));
        let p0 = params(1.0, 0.0, 1.0);
        assert!(matches!(
            solve_free_damped(&p0, &InitialConditions::at_rest()),
            Err(Error::WrongRegime(_))
        ));
    }

    #[test]
    fn damped_dies_out() {
        // Underdamped, critically damped, and overdamped all decay to
        // a negligible fraction of the initial amplitude within 50
        // slowest-root time constants.
        for (r, _name) in [(0.5, "under"), (2.0, "critical"), (3.0, "over")] {
            let p = params(1.0, r, 1.0);
            let init = InitialConditions::new(1.0, -0.5);
            let sol = solve_free_damped(&p, &init).unwrap();
            let report = classify_regime(&p, None);
            let slowest = match report.roots {
                Some((slow, _)) => slow.abs(),
                None => p.resistance() / (2.0 * p.mass()),
            };
            let t = 50.0 / slowest;
            assert!(
                sol.form.value(t).abs() < 1e-6,
                "R={r}: |D({t})| = {}",
                sol.form.value(t).abs()
            );
        }
    }

    #[test]
    fn underdamped_decay_at_fifty_damping_time_constants() {
        // For damped vibration the envelope decays like e^{-(R/2M)t},
        // so 50/(ζω0) = 100M/R leaves less than 1e-6 of the amplitude.
        let p = params(1.0, 0.5, 1.0);
        let init = InitialConditions::new(1.0, 0.0);
        let sol = solve_free_damped(&p, &init).unwrap();
        let zeta_omega0 = p.resistance() / (2.0 * p.mass());
        let t = 50.0 / zeta_omega0;
        assert!(sol.form.value(t).abs() < 1e-6);
    }

    #[test]
    fn overdamped_overshoot_case() {
        // Strong opposing initial speed makes the overdamped motion
        // cross the equilibrium once before creeping back.
        let p = params(1.0, 3.0, 1.0);
        let init = InitialConditions::new(1.0, -5.0);
        let sol = solve_free_damped(&p, &init).unwrap();
        let min = (0..4000)
            .map(|k| sol.form.value(k as f64 * 0.01))
            .fold(f64::INFINITY, f64::min);
        assert!(min < -1e-3, "no overshoot: min = {min}");
        // ... and still settles to zero.
        assert!(sol.form.value(60.0).abs() < 1e-6);
    }

    #[test]
    fn closed_forms_match_rk4() {
        let grid = SampleGrid::new(1e-3, 20.0).unwrap();
        let cases = [
            params(1.0, 0.5, 1.0),
            params(2.0, 1.0, 3.0),
            params(1.0, 2.0, 1.0),
            params(1.0, 4.0, 1.0),
        ];
        for p in cases {
            let init = InitialConditions::new(0.7, -0.3);
            let sol = solve_free_damped(&p, &init).unwrap();
            let closed = sol.sample(&grid).unwrap();
            let numeric =
                rk4_integrate(&p, |_| 0.0, &init, grid.dt, grid.t_end).unwrap();
            let dev = closed.max_abs_deviation(&numeric);
            assert!(dev < 1e-6, "deviation {dev} for {p:?}");
        }
    }

    #[test]
    fn forced_damped_settles_into_steady_state() {
        let p = params(1.0, 0.8, 4.0);
        let init = InitialConditions::new(0.4, 0.2);
        let sol = solve_forced(&p, 1.0, 1.2, 0.0, &init).unwrap();
        assert!(!sol.unbounded);
        // Transient decay rate = R/2M; far past it, total ≈ steady.
        let t = 40.0 * 2.0 * p.mass() / p.resistance();
        let diff = (sol.total().value(t) - sol.steady.value(t)).abs();
        assert!(diff < 1e-6, "transient residue {diff}");
    }

    #[test]
    fn forced_resonant_undamped_grows() {
        let p = params(1.0, 0.0, 1.0);
        let sol = solve_forced(&p, 1.0, 1.0, 0.0, &InitialConditions::at_rest()).unwrap();
        assert!(sol.unbounded);
        let grid = SampleGrid::new(0.01, 20.0).unwrap();
        let short = sol.sample(&grid).unwrap().max_abs_d();
        let grid = SampleGrid::new(0.01, 80.0).unwrap();
        let long = sol.sample(&grid).unwrap().max_abs_d();
        assert!(long > 3.0 * short, "no growth: {short} -> {long}");
    }

    #[test]
    fn below_resonance_in_phase() {
        // Driven well below ω0 without damping: the particular
        // solution is exactly in phase with the force.
        let p = params(1.0, 0.0, 4.0);
        let sol = solve_forced(&p, 1.0, 0.5, 0.0, &InitialConditions::at_rest()).unwrap();
        assert!(sol.phase_lag.abs() < 1e-12);
        // With damping the lag is small but positive below resonance.
        let pd = params(1.0, 0.3, 4.0);
        let sol = solve_forced(&pd, 1.0, 0.5, 0.0, &InitialConditions::at_rest()).unwrap();
        assert!(sol.phase_lag > 0.0 && sol.phase_lag < PI / 4.0);
    }

    #[test]
    fn forced_solution_satisfies_ode() {
        let p = params(1.3, 0.6, 2.1);
        let (amp, omega, phase) = (0.9, 1.4, 0.25);
        let sol = solve_forced(&p, amp, omega, phase, &InitialConditions::new(0.2, 0.1)).unwrap();
        let total = sol.total();
        for k in 0..2000 {
            let t = k as f64 * 0.01;
            let pt = total.eval(t);
            let force = amp * (omega * t + phase).cos();
            let residual = p.mass() * pt.a + p.resistance() * pt.v + p.resilience() * pt.d - force;
            assert!(residual.abs() < 1e-8, "residual {residual} at t={t}");
        }
    }

    #[test]
    fn scenario_superposition_matches_split_runs() {
        // Closed-form scenario with two terms equals the sum of the
        // single-term responses with the initial conditions split.
        let p = params(1.0, 0.7, 2.0);
        let grid = SampleGrid::new(0.01, 15.0).unwrap();
        let combined = Scenario {
            params: p,
            init: InitialConditions::new(0.5, -0.2),
            forcing: Forcing {
                terms: vec![
                    super::super::ForcingTerm::Sinusoid {
                        label: "a".into(),
                        amplitude: 1.0,
                        omega: 0.9,
                        phase: 0.0,
                    },
                    super::super::ForcingTerm::Constant {
                        label: "b".into(),
                        level: 0.6,
                    },
                ],
            },
            grid,
        };
        let lhs = solve_scenario(&combined).unwrap().trajectory;

        let part1 = Scenario {
            forcing: Forcing::single_sinusoid("a", 1.0, 0.9, 0.0),
            init: InitialConditions::new(0.5, -0.2),
            ..combined.clone()
        };
        let part2 = Scenario {
            forcing: Forcing::constant("b", 0.6),
            init: InitialConditions::at_rest(),
            ..combined.clone()
        };
        let t1 = solve_scenario(&part1).unwrap().trajectory;
        let t2 = solve_scenario(&part2).unwrap().trajectory;
        for ((s, s1), s2) in lhs.samples.iter().zip(&t1.samples).zip(&t2.samples) {
            assert!((s.d - (s1.d + s2.d)).abs() < 1e-8);
        }
    }

    #[test]
    fn scenario_with_impulse_goes_numeric() {
        let scenario = Scenario {
            params: params(1.0, 1.0, 1.0),
            init: InitialConditions::at_rest(),
            forcing: Forcing {
                terms: vec![super::super::ForcingTerm::Impulse {
                    label: "fault".into(),
                    magnitude: -1.0,
                    at: 1.0,
                }],
            },
            grid: SampleGrid::new(0.01, 10.0).unwrap(),
        };
        let sol = solve_scenario(&scenario).unwrap();
        assert!(sol.closed_form.is_none());
        assert_eq!(sol.trajectory.solver, super::super::Solver::RungeKutta4);
        // The kick sends the diversity down before resilience pulls it back.
        let min = sol
            .trajectory
            .samples
            .iter()
            .map(|s| s.d)
            .fold(f64::INFINITY, f64::min);
        assert!(min < -0.1);
        assert!(sol.trajectory.samples.last().unwrap().d.abs() < 0.05);
    }
}
