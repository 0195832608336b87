use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::sampling::derive_seed;
use crate::engine::trial::{run_trial, TrialConfig, TrialResult};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome<T> {
    pub index: usize,
    pub seed: u64,
    pub result: TrialResult<T>,
}

/// Rounds-to-detection statistics over the converged trials of an
/// experiment. Non-converged trials only enter `convergence_fraction`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundStats {
    pub trials: usize,
    pub converged: usize,
    pub convergence_fraction: f64,
    pub mean: Option<f64>,
    /// Sample standard deviation (n - 1 denominator); 0 for a single trial.
    pub std_dev: Option<f64>,
    pub min: Option<usize>,
    pub max: Option<usize>,
}

impl RoundStats {
    /// Statistics from `(converged, rounds)` pairs, accumulated in order.
    pub fn from_records(records: impl IntoIterator<Item = (bool, usize)>) -> Self {
        let records: Vec<(bool, usize)> = records.into_iter().collect();
        let rounds: Vec<usize> = records.iter().filter(|(c, _)| *c).map(|(_, r)| *r).collect();
        let trials = records.len();
        let converged = rounds.len();
        let mean = (converged > 0).then(|| rounds.iter().map(|&r| r as f64).sum::<f64>() / converged as f64);
        let std_dev = mean.map(|mu| {
            if converged < 2 {
                0.0
            } else {
                let ss: f64 = rounds.iter().map(|&r| (r as f64 - mu).powi(2)).sum();
                (ss / (converged - 1) as f64).sqrt()
            }
        });
        Self {
            trials,
            converged,
            convergence_fraction: if trials == 0 { 0.0 } else { converged as f64 / trials as f64 },
            mean,
            std_dev,
            min: rounds.iter().copied().min(),
            max: rounds.iter().copied().max(),
        }
    }

    pub fn fully_converged(&self) -> bool {
        self.trials > 0 && self.converged == self.trials
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Experiment<T> {
    pub outcomes: Vec<TrialOutcome<T>>,
    pub stats: RoundStats,
}

/// Runs `trials` independent trials of `base`, trial `k` seeded with
/// `derive_seed(seed_stream, k)`. Trials run in parallel; results are
/// ordered by trial index so the summary does not depend on scheduling.
pub fn run_experiment<T: Scalar>(base: &TrialConfig<T>, trials: usize, seed_stream: u64) -> Result<Experiment<T>> {
    if trials == 0 {
        return Err(Error::InvalidConfig("an experiment needs at least one trial".into()));
    }
    base.validate()?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|index| {
            let seed = derive_seed(seed_stream, index as u64);
            let config = TrialConfig { seed, ..base.clone() };
            run_trial(&config).map(|result| TrialOutcome { index, seed, result })
        })
        .collect::<Result<Vec<_>>>()?;
    let stats = RoundStats::from_records(outcomes.iter().map(|o| (o.result.converged, o.result.rounds)));
    Ok(Experiment { outcomes, stats })
}
