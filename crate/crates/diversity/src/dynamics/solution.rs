//! Closed-form solution terms and their analytic derivatives.

use super::{Regime, Sample, SampleGrid, Solver, Trajectory};

/// `D`, `D'`, and `D''` of a solution at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointDerivs {
    pub d: f64,
    pub v: f64,
    pub a: f64,
}

/// A closed-form solution term of the vibration equation. Every
/// variant evaluates its value and first two derivatives analytically,
/// so solutions can be checked pointwise against the defining ODE.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    /// `e^{λt} (a·cos(μt) + b·sin(μt))` — free vibration with complex
    /// characteristic roots (λ = 0 for the undamped case).
    ExpTrig { lambda: f64, mu: f64, a: f64, b: f64 },
    /// `c1·e^{g t} + c2·e^{h t}` — overdamped motion, two real roots.
    TwoExp { g: f64, h: f64, c1: f64, c2: f64 },
    /// `(c1 + c2·t)·e^{ρt}` — critically damped motion, repeated root.
    RepeatedRoot { rho: f64, c1: f64, c2: f64 },
    /// `coefficient·cos(ωt + θ)` — steady response to a sinusoid. The
    /// coefficient may be negative; callers report `|coefficient|` as
    /// the amplitude.
    Cosine { coefficient: f64, omega: f64, theta: f64 },
    /// `coefficient·t·sin(ωt + θ)` — the secular resonance solution;
    /// grows without bound.
    Secular { coefficient: f64, omega: f64, theta: f64 },
    /// Constant displacement (particular solution of a constant force).
    Constant { level: f64 },
    /// Sum of terms.
    Sum(Vec<ClosedForm>),
}

impl ClosedForm {
    pub fn eval(&self, t: f64) -> PointDerivs {
        match self {
            ClosedForm::ExpTrig { lambda, mu, a, b } => {
                let e = (lambda * t).exp();
                let (sin, cos) = (mu * t).sin_cos();
                // First-derivative coefficients in the same basis.
                let (a1, b1) = (lambda * a + mu * b, lambda * b - mu * a);
                let (a2, b2) = (lambda * a1 + mu * b1, lambda * b1 - mu * a1);
                PointDerivs {
                    d: e * (a * cos + b * sin),
                    v: e * (a1 * cos + b1 * sin),
                    a: e * (a2 * cos + b2 * sin),
                }
            }
            ClosedForm::TwoExp { g, h, c1, c2 } => {
                let (eg, eh) = ((g * t).exp(), (h * t).exp());
                PointDerivs {
                    d: c1 * eg + c2 * eh,
                    v: c1 * g * eg + c2 * h * eh,
                    a: c1 * g * g * eg + c2 * h * h * eh,
                }
            }
            ClosedForm::RepeatedRoot { rho, c1, c2 } => {
                let e = (rho * t).exp();
                let poly = c1 + c2 * t;
                PointDerivs {
                    d: e * poly,
                    v: e * (c2 + rho * poly),
                    a: e * (rho * (2.0 * c2 + rho * poly)),
                }
            }
            ClosedForm::Cosine {
                coefficient,
                omega,
                theta,
            } => {
                let (sin, cos) = (omega * t + theta).sin_cos();
                PointDerivs {
                    d: coefficient * cos,
                    v: -coefficient * omega * sin,
                    a: -coefficient * omega * omega * cos,
                }
            }
            ClosedForm::Secular {
                coefficient,
                omega,
                theta,
            } => {
                let (sin, cos) = (omega * t + theta).sin_cos();
                PointDerivs {
                    d: coefficient * t * sin,
                    v: coefficient * (sin + t * omega * cos),
                    a: coefficient * omega * (2.0 * cos - t * omega * sin),
                }
            }
            ClosedForm::Constant { level } => PointDerivs {
                d: *level,
                v: 0.0,
                a: 0.0,
            },
            ClosedForm::Sum(terms) => {
                let mut total = PointDerivs {
                    d: 0.0,
                    v: 0.0,
                    a: 0.0,
                };
                for term in terms {
                    let p = term.eval(t);
                    total.d += p.d;
                    total.v += p.v;
                    total.a += p.a;
                }
                total
            }
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).d
    }

    /// Sample onto a uniform grid.
    pub fn sample(&self, grid: &SampleGrid, regime: Regime) -> Trajectory {
        let samples = (0..=grid.steps())
            .map(|k| {
                let t = grid.time_at(k);
                let p = self.eval(t);
                Sample { t, d: p.d, v: p.v }
            })
            .collect();
        Trajectory {
            samples,
            regime,
            solver: Solver::ClosedForm,
        }
    }

    pub fn plus(self, other: ClosedForm) -> ClosedForm {
        match self {
            ClosedForm::Sum(mut terms) => {
                terms.push(other);
                ClosedForm::Sum(terms)
            }
            first => ClosedForm::Sum(vec![first, other]),
        }
    }
}
