//! `diversity teams` — list or dump the built-in team fixtures.

use std::path::PathBuf;

use clap::Args;

use diversity::fmt::sig9;
use diversity::sim::{builtin_teams, positional_entropy, trait_entropy};

use crate::CliResult;

#[derive(Args)]
pub struct TeamsArgs {
    /// Write each built-in team as `<dir>/<name>.json`.
    #[arg(long)]
    dump: Option<PathBuf>,
}

pub fn run(args: &TeamsArgs) -> CliResult<()> {
    let teams = builtin_teams();
    println!(
        "{:<8} {:>7} {:>16} {:>16}",
        "team", "players", "H(positioning)", "H(offensiveness)"
    );
    for team in &teams {
        println!(
            "{:<8} {:>7} {:>16} {:>16}",
            team.name(),
            team.players().len(),
            sig9(positional_entropy(team).bits()),
            sig9(trait_entropy(team).bits()),
        );
    }
    if let Some(dir) = &args.dump {
        std::fs::create_dir_all(dir)?;
        for team in &teams {
            let path = dir.join(format!("{}.json", team.name().to_lowercase()));
            std::fs::write(&path, team.to_json_string() + "\n")?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
