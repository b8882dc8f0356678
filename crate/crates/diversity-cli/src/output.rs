//! Output-directory resolution and small file helpers.

use std::path::{Path, PathBuf};

use crate::{CliResult, OutputArgs};

/// Environment variable naming the base directory for default run
/// outputs.
pub const OUT_DIR_ENV: &str = "DIVERSITY_OUT_DIR";

/// Resolve the output directory: `--out` verbatim, otherwise a fresh
/// `<base>/<command>-<timestamp>-<pid>` under `$DIVERSITY_OUT_DIR` or
/// `./runs`. The directory is created.
pub fn resolve_out_dir(args: &OutputArgs, command: &str) -> CliResult<PathBuf> {
    let dir = match &args.out {
        Some(dir) => dir.clone(),
        None => {
            let base = std::env::var_os(OUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("runs"));
            let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%3f");
            base.join(format!("{command}-{stamp}-{}", std::process::id()))
        }
    };
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

pub fn write_file(dir: &Path, name: &str, contents: &[u8]) -> CliResult<()> {
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

pub fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| crate::CliError::Internal(e.to_string()))?;
    write_file(dir, name, (text + "\n").as_bytes())
}
