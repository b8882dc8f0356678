//! `diversity entropy` — society diversity metrics.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use diversity::entropy::{simple_social_entropy, usa_today_index};
use diversity::fmt::sig9;
use diversity::society::Society;
use diversity::taxonomy::{distance_matrix, entropy_curve, Dendrogram};

use crate::manifest::RunManifest;
use crate::output::{resolve_out_dir, write_file, write_json};
use crate::{CliError, CliResult, OutputArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Simple social entropy of one categorical attribute.
    Simple,
    /// Probability that two members drawn with replacement differ on
    /// at least one of the named dimensions.
    Usatoday,
    /// Hierarchic social entropy over the feature vectors.
    Hierarchic,
}

#[derive(Args)]
pub struct EntropyArgs {
    /// Society file (JSON).
    society: PathBuf,

    /// Which metric to compute.
    #[arg(long, value_enum)]
    mode: Mode,

    /// Attribute name (simple mode).
    #[arg(long)]
    attribute: Option<String>,

    /// Comma-separated attribute dimensions (usatoday mode).
    #[arg(long, value_delimiter = ',')]
    dimensions: Vec<String>,

    /// Rescale distances so the last cluster merge sits at h = 1
    /// (hierarchic mode).
    #[arg(long)]
    normalized: bool,

    /// Also export the cluster merge list (hierarchic mode).
    #[arg(long)]
    dendrogram: bool,

    #[command(flatten)]
    out: OutputArgs,
}

/// Replayable argument record.
#[derive(Serialize, Deserialize)]
pub struct EntropySpec {
    pub society: PathBuf,
    pub mode: Mode,
    pub attribute: Option<String>,
    pub dimensions: Vec<String>,
    pub normalized: bool,
    pub dendrogram: bool,
}

#[derive(Serialize)]
struct EntropyReport<'a> {
    metric: &'a str,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    attribute: Option<&'a str>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    dimensions: Vec<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    normalized: Option<bool>,
}

pub fn run(args: &EntropyArgs) -> CliResult<()> {
    let spec = EntropySpec {
        society: args.society.clone(),
        mode: args.mode,
        attribute: args.attribute.clone(),
        dimensions: args.dimensions.clone(),
        normalized: args.normalized,
        dendrogram: args.dendrogram,
    };
    let dir = resolve_out_dir(&args.out, "entropy")?;
    execute(&spec, &dir)
}

pub fn execute(spec: &EntropySpec, dir: &Path) -> CliResult<()> {
    let text = std::fs::read_to_string(&spec.society)
        .map_err(|e| CliError::input(format!("cannot read {:?}: {e}", spec.society)))?;
    let society = Society::from_json_str(&text)?;
    let mut outputs = vec!["report.json".to_owned()];

    let report = match spec.mode {
        Mode::Simple => {
            let attribute = spec.attribute.as_deref().ok_or_else(|| {
                CliError::input("--mode simple requires --attribute")
            })?;
            let value = simple_social_entropy(&society, attribute)?.bits();
            println!("simple social entropy ({attribute}): {} bits", sig9(value));
            EntropyReport {
                metric: "simple",
                value,
                attribute: Some(attribute),
                dimensions: Vec::new(),
                normalized: None,
            }
        }
        Mode::Usatoday => {
            if spec.dimensions.is_empty() {
                return Err(CliError::input("--mode usatoday requires --dimensions"));
            }
            let dims: Vec<&str> = spec.dimensions.iter().map(|s| s.as_str()).collect();
            let value = usa_today_index(&society, &dims)?.probability();
            println!("probability-of-difference index: {}", sig9(value));
            EntropyReport {
                metric: "usatoday",
                value,
                attribute: None,
                dimensions: dims,
                normalized: None,
            }
        }
        Mode::Hierarchic => {
            let mut dm = distance_matrix(&society)?;
            if spec.normalized {
                dm = dm.normalized();
            }
            let curve = entropy_curve(&dm);
            let value = curve.integral();
            println!("hierarchic social entropy: {}", sig9(value));

            let mut csv = String::from("h,entropy\n");
            for (start, val) in curve.breakpoints().iter().zip(curve.values()) {
                csv.push_str(&format!("{},{}\n", sig9(*start), sig9(*val)));
            }
            write_file(dir, "entropy_curve.csv", csv.as_bytes())?;
            outputs.push("entropy_curve.csv".to_owned());

            if spec.dendrogram {
                let mut buf = Vec::new();
                Dendrogram::build(&dm)
                    .write_csv(&mut buf)
                    .map_err(|e| CliError::Internal(e.to_string()))?;
                write_file(dir, "dendrogram.csv", &buf)?;
                outputs.push("dendrogram.csv".to_owned());
            }
            EntropyReport {
                metric: "hierarchic",
                value,
                attribute: None,
                dimensions: Vec::new(),
                normalized: Some(spec.normalized),
            }
        }
    };

    write_json(dir, "report.json", &report)?;
    RunManifest::new(
        "entropy",
        spec,
        vec![spec.society.display().to_string()],
        None,
        outputs,
    )?
    .write(dir)?;
    Ok(())
}
