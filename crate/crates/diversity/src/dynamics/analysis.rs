//! Trajectory analysis: beats, resonance scans, force decomposition,
//! and step responses.

use serde::Serialize;

use super::solve::solve_free_damped;
use super::{
    classify_regime, natural_frequency, solve_free_undamped, ClosedForm, InitialConditions,
    SampleGrid, Trajectory, VibrationParams,
};
use crate::{Error, Result};

/// The three components of the diversifying force at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceComponents {
    /// `M·D''` — overcoming inertia.
    pub inertial: f64,
    /// `R·D'` — overcoming resistance.
    pub resistive: f64,
    /// `E·D` — overcoming resilience.
    pub restoring: f64,
}

impl ForceComponents {
    /// Sum of the components; reproduces the applied force.
    pub fn total(&self) -> f64 {
        self.inertial + self.resistive + self.restoring
    }
}

/// Envelope modulation extracted from a beating trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeatReport {
    /// Period of the signed envelope modulation (twice the node
    /// spacing).
    pub envelope_period: f64,
    /// Angular frequency of the modulation; `|ω0 − ω| / 2` for a
    /// two-tone beat.
    pub beat_omega: f64,
    /// `(max − min) / (max + min)` of the envelope.
    pub modulation_depth: f64,
}

/// Minimum modulation depth that counts as a beat.
const BEAT_DEPTH_THRESHOLD: f64 = 0.25;

/// Detect amplitude beats in a trajectory.
///
/// The envelope is recovered as `sqrt(D² + (D'/ω_c)²)` with the
/// carrier frequency `ω_c` estimated from the median zero-crossing
/// spacing of `D`. Envelope nodes (deep local minima) mark half the
/// modulation period.
///
/// Returns `Ok(None)` for single-frequency motion (no modulation),
/// and an error when the trajectory is too short to contain at least
/// two node intervals.
pub fn detect_beats(trajectory: &Trajectory) -> Result<Option<BeatReport>> {
    let samples = &trajectory.samples;
    if samples.len() < 16 {
        return Err(Error::InsufficientData(
            "trajectory has too few samples for envelope analysis".into(),
        ));
    }

    // Carrier frequency from zero crossings of D.
    let mut crossings = Vec::new();
    for w in samples.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.d == 0.0 {
            crossings.push(a.t);
        } else if a.d.signum() != b.d.signum() && b.d != 0.0 {
            let frac = a.d / (a.d - b.d);
            crossings.push(a.t + frac * (b.t - a.t));
        }
    }
    if crossings.len() < 4 {
        return Err(Error::InsufficientData(
            "too few zero crossings to estimate the carrier frequency".into(),
        ));
    }
    let mut spacings: Vec<f64> = crossings.windows(2).map(|w| w[1] - w[0]).collect();
    spacings.sort_by(f64::total_cmp);
    let half_period = spacings[spacings.len() / 2];
    let carrier_omega = std::f64::consts::PI / half_period;

    // Quadrature envelope.
    let envelope: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| {
            let q = s.v / carrier_omega;
            (s.t, (s.d * s.d + q * q).sqrt())
        })
        .collect();
    let max_env = envelope.iter().map(|(_, e)| *e).fold(0.0, f64::max);
    let min_env = envelope
        .iter()
        .map(|(_, e)| *e)
        .fold(f64::INFINITY, f64::min);
    if max_env == 0.0 {
        return Ok(None);
    }
    let modulation_depth = (max_env - min_env) / (max_env + min_env);
    if modulation_depth < BEAT_DEPTH_THRESHOLD {
        return Ok(None);
    }

    // Envelope nodes: local minima dipping below 20% of the peak,
    // de-duplicated within a few carrier periods.
    let dip = 0.2 * max_env;
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    let min_gap = 3.0 * 2.0 * half_period;
    for i in 1..envelope.len() - 1 {
        let (t, e) = envelope[i];
        if e < dip && e < envelope[i - 1].1 && e <= envelope[i + 1].1 {
            match nodes.last() {
                Some(&(last_t, last_e)) if t - last_t < min_gap => {
                    if e < last_e {
                        *nodes.last_mut().expect("non-empty") = (t, e);
                    }
                }
                _ => nodes.push((t, e)),
            }
        }
    }
    if nodes.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "found {} envelope nodes; need at least 3 (two node intervals)",
            nodes.len()
        )));
    }
    let total_span = nodes.last().expect("non-empty").0 - nodes[0].0;
    let node_spacing = total_span / (nodes.len() - 1) as f64;

    Ok(Some(BeatReport {
        envelope_period: 2.0 * node_spacing,
        beat_omega: std::f64::consts::PI / node_spacing,
        modulation_depth,
    }))
}

/// Steady-state displacement amplitude of the damped response to
/// `F0·cos(ωt)`: `F0 / sqrt(M²(ω0² − ω²)² + R²ω²)`.
pub fn steady_state_amplitude(params: &VibrationParams, omega: f64, f0: f64) -> f64 {
    let m = params.mass();
    let omega0 = natural_frequency(params);
    let restoring = m * (omega0 * omega0 - omega * omega);
    let damping = params.resistance() * omega;
    f0 / (restoring * restoring + damping * damping).sqrt()
}

/// Phase lag of the steady displacement behind the force, in radians
/// within `[0, π]`. Exactly `π/2` at `ω = ω0`.
pub fn steady_state_phase_lag(params: &VibrationParams, omega: f64) -> f64 {
    let m = params.mass();
    let omega0 = natural_frequency(params);
    (params.resistance() * omega).atan2(m * (omega0 * omega0 - omega * omega))
}

/// Steady amplitude across a frequency grid, with the peak location.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceScan {
    pub points: Vec<(f64, f64)>,
    pub peak_omega: f64,
    pub peak_amplitude: f64,
}

/// Evaluate the steady-state amplitude over `omegas`. Requires
/// `R > 0`; an undamped system has no bounded steady amplitude at
/// resonance.
pub fn resonance_scan(
    params: &VibrationParams,
    omegas: &[f64],
    f0: f64,
) -> Result<ResonanceScan> {
    if !params.is_damped() {
        return Err(Error::UnboundedResonance);
    }
    if omegas.is_empty() {
        return Err(Error::InsufficientData("empty frequency grid".into()));
    }
    let points: Vec<(f64, f64)> = omegas
        .iter()
        .map(|&omega| (omega, steady_state_amplitude(params, omega, f0)))
        .collect();
    let &(peak_omega, peak_amplitude) = points
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty grid");
    Ok(ResonanceScan {
        points,
        peak_omega,
        peak_amplitude,
    })
}

/// Settling summary of a step response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepReport {
    /// New equilibrium `F_step / E`.
    pub equilibrium: f64,
    /// First sampled time after which the trajectory stays within 2%
    /// of the equilibrium jump; `None` when it never settles (R = 0).
    pub settling_time: Option<f64>,
}

/// Response to a constant force switched on at `t = 0`.
///
/// The substitution `x = D − F/E` reduces the problem to free
/// vibration around the new equilibrium, so the trajectory is closed
/// form in every regime.
pub fn step_response(
    params: &VibrationParams,
    step_force: f64,
    init: &InitialConditions,
    grid: &SampleGrid,
) -> Result<(Trajectory, StepReport)> {
    grid.validate()?;
    let equilibrium = step_force / params.resilience();
    let shifted = InitialConditions::new(init.d0 - equilibrium, init.v0);
    let homogeneous = if params.is_damped() {
        solve_free_damped(params, &shifted)?.form
    } else {
        solve_free_undamped(params, &shifted)?.form
    };
    let total = homogeneous.plus(ClosedForm::Constant { level: equilibrium });
    let mut trajectory = total.sample(grid, classify_regime(params, None).regime);
    trajectory.regime = classify_regime(params, None).regime;

    let jump = (equilibrium - init.d0).abs().max(1e-12);
    let band = 0.02 * jump;
    let mut settling_time = None;
    for s in trajectory.samples.iter().rev() {
        if (s.d - equilibrium).abs() > band {
            break;
        }
        settling_time = Some(s.t);
    }
    // An oscillation can graze the band right at the end of the run;
    // only count a tail that actually dwells there.
    let end = trajectory.samples.last().expect("non-empty").t;
    if let Some(t) = settling_time {
        if end - t < 0.05 * end {
            settling_time = None;
        }
    }

    Ok((trajectory, StepReport {
        equilibrium,
        settling_time,
    }))
}

#[cfg(test)]
mod tests {
    use super::super::{rk4_integrate, solve_scenario, Forcing, Scenario};
    use super::*;

    fn params(m: f64, r: f64, e: f64) -> VibrationParams {
        VibrationParams::new(m, r, e).unwrap()
    }

    #[test]
    fn beat_frequency_matches_two_tone_formula() {
        // Undamped, driven at 0.9·ω0 from rest: the response is the
        // matched-amplitude two-tone beat.
        let p = params(1.0, 0.0, 1.0);
        let scenario = Scenario {
            params: p,
            init: InitialConditions::at_rest(),
            forcing: Forcing::single_sinusoid("drv", 1.0, 0.9, 0.0),
            grid: SampleGrid::new(0.01, 400.0).unwrap(),
        };
        let traj = solve_scenario(&scenario).unwrap().trajectory;
        let report = detect_beats(&traj).unwrap().expect("beat expected");
        let expected = (1.0 - 0.9f64).abs() / 2.0;
        let rel = (report.beat_omega - expected).abs() / expected;
        assert!(rel < 0.05, "beat omega {} vs {expected}", report.beat_omega);
    }

    #[test]
    fn beat_period_independent_of_phase() {
        let p = params(1.0, 0.0, 1.0);
        let run = |phase: f64| {
            let scenario = Scenario {
                params: p,
                init: InitialConditions::at_rest(),
                forcing: Forcing::single_sinusoid("drv", 1.0, 0.9, phase),
                grid: SampleGrid::new(0.01, 400.0).unwrap(),
            };
            let traj = solve_scenario(&scenario).unwrap().trajectory;
            detect_beats(&traj).unwrap().expect("beat").envelope_period
        };
        let p0 = run(0.0);
        let p1 = run(1.1);
        assert!((p0 - p1).abs() / p0 < 0.05, "{p0} vs {p1}");
    }

    #[test]
    fn pure_tone_has_no_beat() {
        let p = params(1.0, 0.0, 1.0);
        let sol = solve_free_undamped(&p, &InitialConditions::new(1.0, 0.0)).unwrap();
        let traj = sol.sample(&SampleGrid::new(0.01, 100.0).unwrap()).unwrap();
        assert_eq!(detect_beats(&traj).unwrap(), None);
    }

    #[test]
    fn short_trajectory_is_insufficient() {
        let p = params(1.0, 0.0, 1.0);
        let scenario = Scenario {
            params: p,
            init: InitialConditions::at_rest(),
            forcing: Forcing::single_sinusoid("drv", 1.0, 0.9, 0.0),
            grid: SampleGrid::new(0.01, 30.0).unwrap(),
        };
        let traj = solve_scenario(&scenario).unwrap().trajectory;
        assert!(matches!(
            detect_beats(&traj),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn resonance_scan_limits_and_peak() {
        let p = params(1.0, 0.2, 1.0);
        let omegas: Vec<f64> = (1..=300).map(|k| k as f64 * 0.01).collect();
        let scan = resonance_scan(&p, &omegas, 2.0).unwrap();
        // Static limit F0/E at ω → 0.
        let (_, amp_low) = scan.points[0];
        assert!((amp_low - 2.0 / 1.0).abs() < 0.01);
        // Vanishing response at high frequency.
        let (_, amp_high) = *scan.points.last().unwrap();
        assert!(amp_high < 0.3);
        // Peak near ω0 for small damping.
        assert!((scan.peak_omega - 1.0).abs() < 0.05, "peak at {}", scan.peak_omega);
        // 90° lag at resonance.
        let lag = steady_state_phase_lag(&p, 1.0);
        assert!((lag - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn resonance_scan_requires_damping() {
        let p = params(1.0, 0.0, 1.0);
        assert!(matches!(
            resonance_scan(&p, &[1.0], 1.0),
            Err(Error::UnboundedResonance)
        ));
    }

    #[test]
    fn force_components_balance_along_free_motion() {
        let p = params(1.0, 0.5, 2.0);
        let init = InitialConditions::new(0.8, -0.1);
        let traj = rk4_integrate(&p, |_| 0.0, &init, 1e-3, 10.0).unwrap();
        for s in traj.samples.iter().step_by(100) {
            let c = super::super::force_components(&p, s.d, s.v, 0.0);
            assert!(c.total().abs() < 1e-9);
        }
    }

    #[test]
    fn force_components_reproduce_applied_force() {
        let p = params(1.0, 0.5, 2.0);
        let forcing = Forcing::single_sinusoid("drv", 1.0, 0.7, 0.0);
        let traj = rk4_integrate(
            &p,
            |t| forcing.continuous_at(t),
            &InitialConditions::at_rest(),
            1e-3,
            10.0,
        )
        .unwrap();
        for s in traj.samples.iter().step_by(50) {
            let applied = forcing.continuous_at(s.t);
            let c = super::super::force_components(&p, s.d, s.v, applied);
            assert!((c.total() - applied).abs() < 1e-9);
        }
    }

    #[test]
    fn step_settles_at_static_balance() {
        let p = params(1.0, 1.0, 2.0);
        let grid = SampleGrid::new(0.01, 40.0).unwrap();
        let (traj, report) =
            step_response(&p, 1.0, &InitialConditions::at_rest(), &grid).unwrap();
        assert_eq!(report.equilibrium, 0.5);
        assert!((traj.samples.last().unwrap().d - 0.5).abs() < 1e-6);
        assert!(report.settling_time.is_some());
    }

    #[test]
    fn stronger_damping_settles_faster_below_critical() {
        let grid = SampleGrid::new(0.01, 100.0).unwrap();
        let settle = |r: f64| {
            let p = params(1.0, r, 1.0);
            step_response(&p, 1.0, &InitialConditions::at_rest(), &grid)
                .unwrap()
                .1
                .settling_time
                .expect("settles")
        };
        assert!(settle(1.0) < settle(0.2));
    }

    #[test]
    fn undamped_step_never_settles() {
        let p = params(1.0, 0.0, 1.0);
        let grid = SampleGrid::new(0.01, 50.0).unwrap();
        let (_, report) = step_response(&p, 1.0, &InitialConditions::at_rest(), &grid).unwrap();
        assert_eq!(report.settling_time, None);
    }

    #[test]
    fn drop_impulse_with_weaker_restoring_recovers_partially() {
        // Start at the pre-event level 1.0; a downward kick plus a
        // constant force holding a weaker equilibrium at 0.7. The
        // trajectory dips below 0.7 and recovers to strictly between
        // the minimum and the pre-event level.
        let p = params(1.0, 3.0, 1.0);
        let forcing = Forcing {
            terms: vec![
                super::super::ForcingTerm::Constant {
                    label: "restoring-target".into(),
                    level: 0.7,
                },
                super::super::ForcingTerm::Impulse {
                    label: "malfunction".into(),
                    magnitude: -2.0,
                    at: 0.0,
                },
            ],
        };
        let traj = super::super::simulate_forcing(
            &p,
            &forcing,
            &InitialConditions::new(1.0, 0.0),
            0.01,
            60.0,
        )
        .unwrap();
        let min = traj.samples.iter().map(|s| s.d).fold(f64::INFINITY, f64::min);
        let last = traj.samples.last().unwrap().d;
        assert!(min < last, "no dip below the recovered level");
        assert!(last < 1.0, "recovered all the way to the pre-event level");
        assert!((last - 0.7).abs() < 1e-3);
    }
}
