//! Classical 4th-order Runge–Kutta integration of the vibration
//! equation as a first-order system `(D, D')' = (D', (F − R·D' −
//! E·D)/M)`. Fully deterministic; serves as the independent oracle
//! for every closed form in this module.

use super::{
    classify_regime, Forcing, InitialConditions, Sample, SampleGrid, Solver, Trajectory,
    VibrationParams,
};
use crate::{Error, Result};

/// Integrate with a caller-supplied force function. Samples at every
/// grid point including `t = 0`; errors with the blow-up time if the
/// state leaves the finite range.
pub fn rk4_integrate(
    params: &VibrationParams,
    force: impl Fn(f64) -> f64,
    init: &InitialConditions,
    dt: f64,
    t_end: f64,
) -> Result<Trajectory> {
    let grid = SampleGrid::new(dt, t_end)?;
    let steps = grid.steps();
    let mut samples = Vec::with_capacity(steps + 1);
    let mut d = init.d0;
    let mut v = init.v0;
    samples.push(Sample { t: 0.0, d, v });

    for k in 0..steps {
        let t = grid.time_at(k);
        let accel = |t: f64, d: f64, v: f64| params.acceleration(d, v, force(t));

        let (k1d, k1v) = (v, accel(t, d, v));
        let (k2d, k2v) = (
            v + 0.5 * dt * k1v,
            accel(t + 0.5 * dt, d + 0.5 * dt * k1d, v + 0.5 * dt * k1v),
        );
        let (k3d, k3v) = (
            v + 0.5 * dt * k2v,
            accel(t + 0.5 * dt, d + 0.5 * dt * k2d, v + 0.5 * dt * k2v),
        );
        let (k4d, k4v) = (v + dt * k3v, accel(t + dt, d + dt * k3d, v + dt * k3v));

        d += dt * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0;
        v += dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0;

        let t_next = grid.time_at(k + 1);
        if !(d.is_finite() && v.is_finite()) {
            return Err(Error::NonFiniteState { t: t_next });
        }
        samples.push(Sample { t: t_next, d, v });
    }

    Ok(Trajectory {
        samples,
        regime: classify_regime(params, None).regime,
        solver: Solver::RungeKutta4,
    })
}

/// Integrate a full forcing description, including impulse terms.
///
/// An impulse of magnitude `J` at time `t` kicks the speed by `J/M`
/// at the nearest grid sample; the recorded sample at that time shows
/// the post-kick speed.
pub fn simulate_forcing(
    params: &VibrationParams,
    forcing: &Forcing,
    init: &InitialConditions,
    dt: f64,
    t_end: f64,
) -> Result<Trajectory> {
    forcing.validate()?;
    let grid = SampleGrid::new(dt, t_end)?;
    let steps = grid.steps();

    // Impulses quantized to their nearest sample index.
    let mut kicks: Vec<(usize, f64)> = forcing
        .impulses()
        .map(|(at, magnitude)| {
            let idx = (at / dt).round().clamp(0.0, steps as f64) as usize;
            (idx, magnitude / params.mass())
        })
        .collect();
    kicks.sort_by_key(|(idx, _)| *idx);

    let kick_at = |idx: usize| -> f64 {
        kicks
            .iter()
            .filter(|(k, _)| *k == idx)
            .map(|(_, dv)| dv)
            .sum()
    };

    let mut samples = Vec::with_capacity(steps + 1);
    let mut d = init.d0;
    let mut v = init.v0 + kick_at(0);
    samples.push(Sample { t: 0.0, d, v });

    for k in 0..steps {
        let t = grid.time_at(k);
        let force = |t: f64| forcing.continuous_at(t);
        let accel = |t: f64, d: f64, v: f64| params.acceleration(d, v, force(t));

        let (k1d, k1v) = (v, accel(t, d, v));
        let (k2d, k2v) = (
            v + 0.5 * dt * k1v,
            accel(t + 0.5 * dt, d + 0.5 * dt * k1d, v + 0.5 * dt * k1v),
        );
        let (k3d, k3v) = (
            v + 0.5 * dt * k2v,
            accel(t + 0.5 * dt, d + 0.5 * dt * k2d, v + 0.5 * dt * k2v),
        );
        let (k4d, k4v) = (v + dt * k3v, accel(t + dt, d + dt * k3d, v + dt * k3v));

        d += dt * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0;
        v += dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0;
        v += kick_at(k + 1);

        let t_next = grid.time_at(k + 1);
        if !(d.is_finite() && v.is_finite()) {
            return Err(Error::NonFiniteState { t: t_next });
        }
        samples.push(Sample { t: t_next, d, v });
    }

    Ok(Trajectory {
        samples,
        regime: classify_regime(params, Some(forcing)).regime,
        solver: Solver::RungeKutta4,
    })
}
