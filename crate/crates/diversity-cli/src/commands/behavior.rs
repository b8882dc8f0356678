//! `diversity behavior` — pairwise Φ1/Φ2 matrix, equivalence flags,
//! and the ε-homogeneity verdict.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use diversity::behavior::{
    is_equivalent, parse_policy_csv, phi1, phi2, PolicyTable,
};
use diversity::fmt::sig9;
use diversity::sim::MatchLog;

use crate::manifest::RunManifest;
use crate::output::{resolve_out_dir, write_file, write_json};
use crate::{CliError, CliResult, OutputArgs};

#[derive(Args)]
pub struct BehaviorArgs {
    /// Policy table CSV files (header
    /// `agent_id,state_id,action_id,visit_count`); may repeat.
    #[arg(long, required_unless_present = "log", conflicts_with = "log")]
    policies: Vec<PathBuf>,

    /// Match log CSV; empirical policies are derived per agent from
    /// the most frequent activity in each state.
    #[arg(long)]
    log: Option<PathBuf>,

    /// First tick of the analysis window (log mode).
    #[arg(long, default_value_t = 0)]
    window_start: u64,

    /// One past the last tick of the analysis window (log mode)
    /// [default: end of log].
    #[arg(long)]
    window_end: Option<u64>,

    /// ε-similarity threshold on Φ2.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize, Deserialize)]
pub struct BehaviorSpec {
    pub policies: Vec<PathBuf>,
    pub log: Option<PathBuf>,
    pub window_start: u64,
    pub window_end: Option<u64>,
    pub epsilon: f64,
}

#[derive(Serialize)]
struct PairEntry {
    agent_a: String,
    agent_b: String,
    phi1: f64,
    phi2: f64,
    equivalent: bool,
}

#[derive(Serialize)]
struct BehaviorReport {
    agents: Vec<String>,
    epsilon: f64,
    epsilon_homogeneous: bool,
    pairs: Vec<PairEntry>,
}

pub fn run(args: &BehaviorArgs) -> CliResult<()> {
    let spec = BehaviorSpec {
        policies: args.policies.clone(),
        log: args.log.clone(),
        window_start: args.window_start,
        window_end: args.window_end,
        epsilon: args.epsilon,
    };
    let dir = resolve_out_dir(&args.out, "behavior")?;
    execute(&spec, &dir)
}

fn load_tables(spec: &BehaviorSpec) -> CliResult<Vec<PolicyTable>> {
    if let Some(log_path) = &spec.log {
        let text = std::fs::read_to_string(log_path)
            .map_err(|e| CliError::input(format!("cannot read {log_path:?}: {e}")))?;
        let log = MatchLog::from_csv(&text)?;
        let end = spec.window_end.unwrap_or(log.ticks());
        let window = spec.window_start..end;
        return log
            .all_agents()
            .iter()
            .map(|agent| Ok(PolicyTable::from_match_log(&log, agent, window.clone())?))
            .collect();
    }
    let mut tables = Vec::new();
    for path in &spec.policies {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {path:?}: {e}")))?;
        let (_, mut file_tables) = parse_policy_csv(&text)?;
        tables.append(&mut file_tables);
    }
    Ok(tables)
}

pub fn execute(spec: &BehaviorSpec, dir: &Path) -> CliResult<()> {
    if spec.epsilon.is_nan() || spec.epsilon <= 0.0 {
        return Err(CliError::input(format!(
            "epsilon must be positive, got {}",
            spec.epsilon
        )));
    }
    let tables = load_tables(spec)?;
    if tables.len() < 2 {
        return Err(CliError::input(format!(
            "need at least 2 agents, resolved {}",
            tables.len()
        )));
    }

    let mut pairs = Vec::new();
    let mut homogeneous = true;
    let mut csv = String::from("agent_a,agent_b,phi1,phi2,equivalent\n");
    for (i, a) in tables.iter().enumerate() {
        for b in &tables[i + 1..] {
            let p1 = phi1(a, b)?;
            let p2 = phi2(a, b)?;
            let eq = is_equivalent(a, b);
            homogeneous &= p2 < spec.epsilon;
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                a.agent(),
                b.agent(),
                sig9(p1),
                sig9(p2),
                eq
            ));
            pairs.push(PairEntry {
                agent_a: a.agent().to_string(),
                agent_b: b.agent().to_string(),
                phi1: p1,
                phi2: p2,
                equivalent: eq,
            });
        }
    }

    println!(
        "{} agents, {} pairs; epsilon-homogeneous at {}: {}",
        tables.len(),
        pairs.len(),
        sig9(spec.epsilon),
        homogeneous
    );
    for p in pairs.iter().take(10) {
        println!(
            "  {} vs {}: phi1 {} phi2 {}",
            p.agent_a,
            p.agent_b,
            sig9(p.phi1),
            sig9(p.phi2)
        );
    }

    write_file(dir, "phi_matrix.csv", csv.as_bytes())?;
    let report = BehaviorReport {
        agents: tables.iter().map(|t| t.agent().to_string()).collect(),
        epsilon: spec.epsilon,
        epsilon_homogeneous: homogeneous,
        pairs,
    };
    write_json(dir, "report.json", &report)?;

    let inputs: Vec<String> = spec
        .policies
        .iter()
        .chain(spec.log.iter())
        .map(|p| p.display().to_string())
        .collect();
    RunManifest::new(
        "behavior",
        spec,
        inputs,
        None,
        vec!["phi_matrix.csv".into(), "report.json".into()],
    )?
    .write(dir)?;
    Ok(())
}
