//! CLI half of the acceptance suite: experiment determinism under
//! manifest replay (criterion 12; 1–11 and 13 live in the library's
//! acceptance suite).

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

fn run(args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_diversity"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn criterion_12_experiment_replay_is_byte_identical() {
    let started = Instant::now();
    let budget = Duration::from_secs(60);

    let base = tempfile::tempdir().unwrap();
    let first = base.path().join("first");
    let second = base.path().join("second");

    // Three consecutive games per challenger, all six built-ins.
    run(&[
        "experiment",
        "--control",
        "Control",
        "--challengers",
        "Kids0,Agr,Kids2,Kids1,Kids3,Control",
        "--games",
        "3",
        "--seed",
        "1999",
        "--out",
        first.to_str().unwrap(),
    ]);
    run(&[
        "replay",
        first.join("manifest.json").to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);

    let bytes = |dir: &Path, name: &str| std::fs::read(dir.join(name)).unwrap();
    assert_eq!(
        bytes(&first, "report.csv"),
        bytes(&second, "report.csv"),
        "replayed report.csv differs"
    );
    assert_eq!(
        bytes(&first, "report.json"),
        bytes(&second, "report.json"),
        "replayed report.json differs"
    );
    // Exactly one manifest per output directory.
    for dir in [&first, &second] {
        let manifests = std::fs::read_dir(dir)
            .unwrap()
            .filter(|e| e.as_ref().unwrap().file_name() == "manifest.json")
            .count();
        assert_eq!(manifests, 1);
    }

    let elapsed = started.elapsed();
    assert!(
        elapsed <= budget,
        "criterion 12 exceeded its {budget:?} budget: {elapsed:?}"
    );
    println!("ACCEPTANCE 12 PASS ({elapsed:?}): experiment replay byte-identical");
}
