use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use distdetect::engine::{derive_seed, run_trial, TrialConfig};
use distdetect::scenario::{Placement, ScenarioPreset};
use distdetect::RuleKind;
use distdetect_cli::{summarize_rows, trajectory_path, Summary, TrialRow, SUMMARY_JSON, TRAJECTORY_DIR, TRIALS_CSV};

fn distdetect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distdetect"))
        .args(args)
        .env_remove("DISTDETECT_OUTPUT_DIR")
        .output()
        .unwrap()
}

fn read_rows(dir: &Path) -> Vec<TrialRow> {
    csv::Reader::from_path(dir.join(TRIALS_CSV))
        .unwrap()
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap()
}

fn read_summary(dir: &Path) -> Summary {
    serde_json::from_slice(&fs::read(dir.join(SUMMARY_JSON)).unwrap()).unwrap()
}

#[test]
fn full_grid_writes_consistent_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = distdetect(&["--trials", "4", "--seed", "9", "--output", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let rows = read_rows(dir.path());
    assert_eq!(rows.len(), 6 * 2 * 4);
    let summary = read_summary(dir.path());
    assert_eq!(summary.cells.len(), 12);
    assert_eq!(summary.master_seed, 9);
    assert_eq!(summary.cells, summarize_rows(&rows));
    for rule in RuleKind::ALL {
        for placement in Placement::ALL {
            let cell = summary
                .cells
                .iter()
                .find(|c| c.rule == rule.name() && c.scenario == placement.name())
                .unwrap();
            let rounds: Vec<f64> = rows
                .iter()
                .filter(|r| r.rule == rule.name() && r.scenario == placement.name() && r.converged)
                .map(|r| r.rounds as f64)
                .collect();
            let mean = rounds.iter().sum::<f64>() / rounds.len() as f64;
            assert!((cell.stats.mean.unwrap() - mean).abs() < 1e-9);
        }
    }

    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("BLoAD")).count(), 2, "{stdout}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("LiAB"), "LiAB has no condition and is flagged: {stderr}");
}

#[test]
fn same_seed_same_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let out = distdetect(&["--trials", "3", "--rule", "LoAB,BLiA", "--output", dir.path().to_str().unwrap()]);
        assert!(out.status.success());
    }
    for file in [TRIALS_CSV, SUMMARY_JSON] {
        assert_eq!(fs::read(a.path().join(file)).unwrap(), fs::read(b.path().join(file)).unwrap(), "{file}");
    }
}

#[test]
fn trajectories_match_a_direct_trial() {
    let dir = tempfile::tempdir().unwrap();
    let out = distdetect(&[
        "--trials", "1", "--rule", "BLoA", "--scenario", "mixed", "--seed", "31", "--trajectories", "--output",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let net: distdetect::Network64 = ScenarioPreset::new(Placement::Mixed).build().unwrap();
    let mut cfg = TrialConfig::new(RuleKind::BLoA, net, derive_seed(31, 0));
    cfg.record_trajectory = true;
    let expected = run_trial(&cfg).unwrap().trajectory.unwrap();

    let path = trajectory_path(&dir.path().join(TRAJECTORY_DIR), "mixed", RuleKind::BLoA, 0);
    let mut reader = csv::Reader::from_path(path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["round", "agent", "theta1", "theta2", "theta3"]);
    let records: Vec<csv::StringRecord> = reader.records().collect::<Result<_, _>>().unwrap();
    assert_eq!(records.len(), expected.len() * 20);
    for record in records {
        let round: usize = record[0].parse().unwrap();
        let agent: usize = record[1].parse().unwrap();
        let values: Vec<f64> = (2..5).map(|k| record[k].parse().unwrap()).collect();
        assert_eq!(values, expected[round][agent].as_slice());
    }
}

#[test]
fn config_file_with_inline_network() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    let output = dir.path().join("out");
    fs::write(
        &config,
        format!(
            r#"
rules = ["BLoA", "BLiA"]
scenarios = ["pair"]
trials = 3
master_seed = 5
output = "{}"

[[networks]]
name = "pair"
states = ["a", "b"]
true_state = "b"
signals = ["x", "y"]
weights = [[0.5, 0.5], [0.5, 0.5]]
models = [
    [[0.3, 0.7], [0.6, 0.4]],
    [[0.3, 0.7], [0.6, 0.4]],
]
"#,
            output.display()
        ),
    )
    .unwrap();
    let out = distdetect(&["--config", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_rows(&output);
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.scenario == "pair" && r.converged));

    // flags win over the file
    let out = distdetect(&["--config", config.to_str().unwrap(), "--trials", "2", "--rule", "LoAB"]);
    assert!(out.status.success());
    let rows = read_rows(&output);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.rule == "LoAB"));
}

#[test]
fn env_var_sets_default_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let out = Command::new(env!("CARGO_BIN_EXE_distdetect"))
        .args(["--trials", "1", "--rule", "LoAB", "--scenario", "mixed"])
        .env("DISTDETECT_OUTPUT_DIR", &target)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join(TRIALS_CSV).exists());
    assert!(!dir.path().join("results").exists());
}

#[test]
fn invalid_input_fails_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().to_str().unwrap();
    let missing = dir.path().join("missing.toml");
    let bad_cases: Vec<Vec<&str>> = vec![
        vec!["--rule", "Foo", "--output", o],
        vec!["--scenario", "ring", "--output", o],
        vec!["--trials", "0", "--output", o],
        vec!["--threshold", "2", "--output", o],
        vec!["--max-rounds", "0", "--output", o],
        vec!["--config", missing.to_str().unwrap(), "--output", o],
    ];
    for args in bad_cases {
        let out = distdetect(&args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }

    let config = dir.path().join("typo.toml");
    fs::write(&config, "trails = 3\n").unwrap();
    let out = distdetect(&["--config", config.to_str().unwrap(), "--output", o]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("trails"));
}
