//! `diversity dynamics` — solve a scenario file, export the
//! trajectory, and optionally cross-check against the integration
//! oracle.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use diversity::dynamics::{simulate_forcing, solve_scenario, RegimeReport, Scenario};
use diversity::fmt::sig9;

use crate::manifest::RunManifest;
use crate::output::{resolve_out_dir, write_file, write_json};
use crate::{CliError, CliResult, OutputArgs};

#[derive(Args)]
pub struct DynamicsArgs {
    /// Scenario file (JSON): params {M, R, E}, init {D0, V0}, forcing
    /// term list, grid {dt, t_end}.
    scenario: PathBuf,

    /// Also integrate numerically and report the max-abs deviation
    /// from the closed form.
    #[arg(long)]
    oracle: bool,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize, Deserialize)]
pub struct DynamicsSpec {
    pub scenario: PathBuf,
    pub oracle: bool,
}

#[derive(Serialize)]
struct DynamicsReport {
    #[serde(flatten)]
    regime: RegimeReport,
    solver: &'static str,
    unbounded_resonance: bool,
    max_abs_d: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_max_deviation: Option<f64>,
}

pub fn run(args: &DynamicsArgs) -> CliResult<()> {
    let spec = DynamicsSpec {
        scenario: args.scenario.clone(),
        oracle: args.oracle,
    };
    let dir = resolve_out_dir(&args.out, "dynamics")?;
    execute(&spec, &dir)
}

pub fn execute(spec: &DynamicsSpec, dir: &Path) -> CliResult<()> {
    let text = std::fs::read_to_string(&spec.scenario)
        .map_err(|e| CliError::input(format!("cannot read {:?}: {e}", spec.scenario)))?;
    let scenario = Scenario::from_json_str(&text)?;
    let solution = solve_scenario(&scenario)?;
    let mut outputs = vec!["trajectory.csv".to_owned(), "report.json".to_owned()];

    let mut csv = Vec::new();
    solution
        .trajectory
        .write_csv(&mut csv, &scenario.forcing)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    write_file(dir, "trajectory.csv", &csv)?;

    let oracle_max_deviation = if spec.oracle && solution.closed_form.is_some() {
        let numeric = simulate_forcing(
            &scenario.params,
            &scenario.forcing,
            &scenario.init,
            scenario.grid.dt,
            scenario.grid.t_end,
        )?;
        let mut csv = Vec::new();
        numeric
            .write_csv(&mut csv, &scenario.forcing)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        write_file(dir, "oracle.csv", &csv)?;
        outputs.push("oracle.csv".to_owned());
        Some(solution.trajectory.max_abs_deviation(&numeric))
    } else {
        None
    };

    let report = DynamicsReport {
        regime: solution.report,
        solver: match solution.closed_form {
            Some(_) => "closed-form",
            None => "rk4",
        },
        unbounded_resonance: solution.unbounded_resonance,
        max_abs_d: solution.trajectory.max_abs_d(),
        oracle_max_deviation,
    };
    write_json(dir, "report.json", &report)?;

    println!(
        "regime: {:?}; natural frequency {} rad/s",
        solution.report.regime,
        sig9(solution.report.natural_frequency)
    );
    if let Some(q) = solution.report.quasiperiod {
        println!("quasiperiod: {}", sig9(q));
    }
    if let Some((g, h)) = solution.report.roots {
        println!("characteristic roots: {} {}", sig9(g), sig9(h));
    }
    if solution.unbounded_resonance {
        println!("resonant forcing at the natural frequency: motion grows without bound");
    }
    if let Some(dev) = oracle_max_deviation {
        println!("oracle max |deviation|: {}", sig9(dev));
    }

    RunManifest::new(
        "dynamics",
        spec,
        vec![spec.scenario.display().to_string()],
        None,
        outputs,
    )?
    .write(dir)?;
    Ok(())
}
