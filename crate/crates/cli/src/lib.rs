//! Batch experiment harness: runs every (rule, scenario) cell of an
//! [`ExperimentSpec`], writes per-trial CSV rows and a JSON summary, and
//! renders a comparison table.
//!
//! All cells share one master seed, so trial `k` of every cell starts from
//! the same initial beliefs and sees the same signal stream.

pub mod config;

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use distdetect::engine::{
    derive_seed, rng_from_seed, run_experiment, sample_initial_beliefs_with, InitialBeliefs, RoundStats, TrialConfig,
    TrialOutcome,
};
use distdetect::network::check_conditions;
use distdetect::RuleKind;

pub use config::{ConfigFile, ExperimentSpec, InlineNetwork, Overrides, Scenario};

pub const TRIALS_CSV: &str = "trials.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const TRAJECTORY_DIR: &str = "trajectories";

/// One line of the per-trial CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub rule: String,
    pub scenario: String,
    pub trial: usize,
    pub seed: u64,
    pub converged: bool,
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub rule: String,
    pub scenario: String,
    #[serde(flatten)]
    pub stats: RoundStats,
    /// Some trials hit `max_rounds` without converging.
    pub incomplete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub master_seed: u64,
    pub trials: usize,
    pub threshold: f64,
    pub max_rounds: usize,
    pub cells: Vec<CellSummary>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub rows: Vec<TrialRow>,
    pub summary: Summary,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Summary statistics per cell, recomputed from CSV rows in row order.
pub fn summarize_rows(rows: &[TrialRow]) -> Vec<CellSummary> {
    // (rule, scenario, per-trial (converged, rounds))
    type Cell = (String, String, Vec<(bool, usize)>);
    let mut cells: Vec<Cell> = Vec::new();
    for row in rows {
        match cells.iter_mut().find(|(r, s, _)| *r == row.rule && *s == row.scenario) {
            Some((_, _, records)) => records.push((row.converged, row.rounds)),
            None => cells.push((row.rule.clone(), row.scenario.clone(), vec![(row.converged, row.rounds)])),
        }
    }
    cells
        .into_iter()
        .map(|(rule, scenario, records)| {
            let stats = RoundStats::from_records(records);
            CellSummary {
                rule,
                scenario,
                incomplete: !stats.fully_converged(),
                stats,
            }
        })
        .collect()
}

/// Runs the experiment and writes `trials.csv`, `summary.json` and, when
/// requested, one trajectory file per trial under the output directory.
pub fn run_cli(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    fs::create_dir_all(&spec.output_dir)
        .with_context(|| format!("creating output directory {}", spec.output_dir.display()))?;
    let trajectory_dir = spec.output_dir.join(TRAJECTORY_DIR);
    if spec.emit_trajectories {
        fs::create_dir_all(&trajectory_dir)
            .with_context(|| format!("creating {}", trajectory_dir.display()))?;
    }

    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for scenario in &spec.scenarios {
        let network = scenario.build()?;
        for &rule in &spec.rules {
            warnings.extend(condition_warnings(spec, scenario.name(), rule, &network)?);

            let mut base = TrialConfig::new(rule, network.clone(), spec.master_seed);
            base.threshold = spec.threshold;
            base.max_rounds = spec.max_rounds;
            base.initial_beliefs = InitialBeliefs::Random(spec.initial_beliefs);
            base.record_trajectory = spec.emit_trajectories;
            let experiment = run_experiment(&base, spec.trials, spec.master_seed)
                .with_context(|| format!("{rule} on {}", scenario.name()))?;

            for outcome in &experiment.outcomes {
                if spec.emit_trajectories {
                    write_trajectory(&trajectory_dir, scenario.name(), rule, outcome, network.states().labels())?;
                }
                rows.push(TrialRow {
                    rule: rule.name().to_string(),
                    scenario: scenario.name().to_string(),
                    trial: outcome.index,
                    seed: outcome.seed,
                    converged: outcome.result.converged,
                    rounds: outcome.result.rounds,
                });
            }
            if !experiment.stats.fully_converged() {
                warnings.push(format!(
                    "{rule} on {}: only {}/{} trials converged within {} rounds",
                    scenario.name(),
                    experiment.stats.converged,
                    experiment.stats.trials,
                    spec.max_rounds
                ));
            }
        }
    }

    let csv_path = spec.output_dir.join(TRIALS_CSV);
    write_rows(&csv_path, &rows)?;

    let summary = Summary {
        master_seed: spec.master_seed,
        trials: spec.trials,
        threshold: spec.threshold,
        max_rounds: spec.max_rounds,
        cells: summarize_rows(&rows),
        warnings,
    };
    let summary_path = spec.output_dir.join(SUMMARY_JSON);
    let file = File::create(&summary_path).with_context(|| format!("creating {}", summary_path.display()))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, &summary)?;
    out.write_all(b"\n")?;
    out.flush()?;

    Ok(RunReport {
        rows,
        summary,
        csv_path,
        summary_path,
    })
}

/// Condition verdicts for the first trial's initial beliefs, as warnings.
fn condition_warnings(
    spec: &ExperimentSpec,
    scenario: &str,
    rule: RuleKind,
    network: &distdetect::network::Network<f64>,
) -> Result<Vec<String>> {
    let mut rng = rng_from_seed(derive_seed(spec.master_seed, 0));
    let initial = sample_initial_beliefs_with(&mut rng, network.len(), network.num_states(), spec.initial_beliefs);
    let reports = check_conditions(network, rule, &initial, None, None)?;
    let mut warnings = Vec::new();
    for report in reports {
        match report.condition_id {
            None => warnings.push(format!(
                "{rule} on {scenario}: no published convergence condition; results are empirical only"
            )),
            Some(id) if !report.overall => {
                for clause in report.clauses.iter().filter(|c| !c.holds) {
                    warnings.push(format!(
                        "{rule} on {scenario}: condition {id} clause {} fails ({}): {}",
                        clause.clause, clause.description, clause.diagnostic
                    ));
                }
            }
            Some(_) => {}
        }
    }
    Ok(warnings)
}

fn write_rows(path: &Path, rows: &[TrialRow]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        writer.serialize(row)?;
    }
    if rows.is_empty() {
        writer.write_record(["rule", "scenario", "trial", "seed", "converged", "rounds"])?;
    }
    writer.flush()?;
    Ok(())
}

/// Path of the trajectory dump for one trial.
pub fn trajectory_path(dir: &Path, scenario: &str, rule: RuleKind, trial: usize) -> PathBuf {
    dir.join(format!("{scenario}_{rule}_trial{trial}.csv"))
}

fn write_trajectory(
    dir: &Path,
    scenario: &str,
    rule: RuleKind,
    outcome: &TrialOutcome<f64>,
    labels: &[String],
) -> Result<()> {
    let Some(trajectory) = &outcome.result.trajectory else {
        return Ok(());
    };
    let path = trajectory_path(dir, scenario, rule, outcome.index);
    let mut writer = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
    let mut header = vec!["round".to_string(), "agent".to_string()];
    header.extend(labels.iter().cloned());
    writer.write_record(&header)?;
    for (round, beliefs) in trajectory.iter().enumerate() {
        for (agent, belief) in beliefs.iter().enumerate() {
            let mut record = vec![round.to_string(), agent.to_string()];
            record.extend(belief.iter().map(|x| x.to_string()));
            writer.write_record(&record)?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Fixed-width comparison table, one row per cell.
pub fn format_table(cells: &[CellSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<7} {:<12} {:>9} {:>10} {:>10} {:>7} {:>7}",
        "rule", "scenario", "conv", "mean", "std", "min", "max"
    );
    for c in cells {
        let fmt_opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.1}"));
        let fmt_int = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        let _ = writeln!(
            out,
            "{:<7} {:<12} {:>9} {:>10} {:>10} {:>7} {:>7}{}",
            c.rule,
            c.scenario,
            format!("{}/{}", c.stats.converged, c.stats.trials),
            fmt_opt(c.stats.mean),
            fmt_opt(c.stats.std_dev),
            fmt_int(c.stats.min),
            fmt_int(c.stats.max),
            if c.incomplete { "  *" } else { "" }
        );
    }
    out
}
