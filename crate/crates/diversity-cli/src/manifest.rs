//! Run manifests: every output directory holds exactly one
//! `manifest.json` that records what produced its contents and
//! suffices to reproduce the run (`diversity replay`).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Version of the CSV/JSON column and field contract.
    pub format_version: u32,
    pub command: String,
    /// Command-specific arguments, sufficient for an exact re-run.
    pub args: serde_json::Value,
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub created: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        args: impl Serialize,
        inputs: Vec<String>,
        seed: Option<u64>,
        outputs: Vec<String>,
    ) -> CliResult<Self> {
        Ok(RunManifest {
            tool: "diversity".to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            format_version: FORMAT_VERSION,
            command: command.to_owned(),
            args: serde_json::to_value(args)
                .map_err(|e| CliError::Internal(e.to_string()))?,
            inputs,
            seed,
            created: chrono::Utc::now().to_rfc3339(),
            outputs,
        })
    }

    pub fn write(&self, dir: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        std::fs::write(dir.join(MANIFEST_FILE), text + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read manifest {path:?}: {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("malformed manifest {path:?}: {e}")))
    }
}
