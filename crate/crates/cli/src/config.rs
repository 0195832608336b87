//! Experiment configuration: a TOML file, overridable by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};

use distdetect::engine::{InitialScheme, DEFAULT_MAX_ROUNDS, DEFAULT_THRESHOLD};
use distdetect::network::{Network, Topology};
use distdetect::scenario::{Placement, ScenarioPreset, DEFAULT_AGENTS, DEFAULT_NEIGHBORHOOD};
use distdetect::{RuleKind, SignalModel, StateSpace};

/// Environment variable consulted for the output directory when neither the
/// config file nor `--output` sets one.
pub const OUTPUT_DIR_ENV: &str = "DISTDETECT_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "results";
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_SEED: u64 = 2024;

/// A network described inline in the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineNetwork {
    pub name: String,
    pub states: Vec<String>,
    /// Label of the true state.
    pub true_state: String,
    pub signals: Vec<String>,
    /// Row-stochastic weights; `weights[i][j]` is how much agent `i` listens to `j`.
    pub weights: Vec<Vec<f64>>,
    /// Per agent, one likelihood row over `signals` for each state.
    pub models: Vec<Vec<Vec<f64>>>,
}

impl InlineNetwork {
    pub fn build(&self) -> Result<Network<f64>> {
        let true_index = self
            .states
            .iter()
            .position(|s| *s == self.true_state)
            .with_context(|| format!("network {:?}: true state {:?} is not listed", self.name, self.true_state))?;
        let states = StateSpace::new(self.states.iter().cloned(), true_index)?;
        let topology = Topology::from_weights(self.weights.clone())?;
        let models = self
            .models
            .iter()
            .enumerate()
            .map(|(i, rows)| {
                SignalModel::new(self.signals.iter().cloned(), rows.clone())
                    .with_context(|| format!("network {:?}: agent {i}", self.name))
            })
            .collect::<Result<Vec<_>>>()?;
        Network::new(topology, models, states).with_context(|| format!("network {:?}", self.name))
    }
}

/// Contents of the TOML config file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub rules: Option<Vec<String>>,
    pub scenarios: Option<Vec<String>>,
    pub trials: Option<usize>,
    pub master_seed: Option<u64>,
    pub threshold: Option<f64>,
    pub max_rounds: Option<usize>,
    pub output: Option<PathBuf>,
    pub trajectories: Option<bool>,
    pub initial_beliefs: Option<InitialScheme>,
    pub agents: Option<usize>,
    pub neighborhood: Option<usize>,
    #[serde(default)]
    pub networks: Vec<InlineNetwork>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }
}

/// Values given on the command line; they take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub rules: Vec<String>,
    pub scenarios: Vec<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub threshold: Option<f64>,
    pub max_rounds: Option<usize>,
    pub output: Option<PathBuf>,
    pub trajectories: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Scenario {
    Preset(ScenarioPreset),
    Inline(InlineNetwork),
}

impl Scenario {
    pub fn name(&self) -> &str {
        match self {
            Scenario::Preset(p) => p.placement.name(),
            Scenario::Inline(n) => &n.name,
        }
    }

    pub fn build(&self) -> Result<Arc<Network<f64>>> {
        let net = match self {
            Scenario::Preset(p) => p.build()?,
            Scenario::Inline(n) => n.build()?,
        };
        Ok(Arc::new(net))
    }
}

/// A fully resolved, validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub scenarios: Vec<Scenario>,
    pub rules: Vec<RuleKind>,
    pub trials: usize,
    pub master_seed: u64,
    pub threshold: f64,
    pub max_rounds: usize,
    pub output_dir: PathBuf,
    pub emit_trajectories: bool,
    pub initial_beliefs: InitialScheme,
}

impl ExperimentSpec {
    /// Merges file values, flag overrides and defaults. `env_output` is the
    /// value of [`OUTPUT_DIR_ENV`], if set.
    pub fn resolve(file: ConfigFile, flags: Overrides, env_output: Option<PathBuf>) -> Result<Self> {
        let rule_names = if flags.rules.is_empty() {
            file.rules
                .unwrap_or_else(|| RuleKind::ALL.iter().map(|r| r.name().to_string()).collect())
        } else {
            flags.rules
        };
        let rules = rule_names
            .iter()
            .flat_map(|s| s.split(','))
            .map(|s| s.trim().parse::<RuleKind>())
            .collect::<distdetect::Result<Vec<_>>>()?;

        let n = file.agents.unwrap_or(DEFAULT_AGENTS);
        let k = file.neighborhood.unwrap_or(DEFAULT_NEIGHBORHOOD);
        let scenario_names = if !flags.scenarios.is_empty() {
            flags.scenarios
        } else if let Some(s) = file.scenarios {
            s
        } else if file.networks.is_empty() {
            Placement::ALL.iter().map(|p| p.name().to_string()).collect()
        } else {
            Vec::new()
        };
        let mut scenarios = Vec::new();
        for name in scenario_names.iter().flat_map(|s| s.split(',')).map(str::trim) {
            if let Some(net) = file.networks.iter().find(|net| net.name == name) {
                scenarios.push(Scenario::Inline(net.clone()));
            } else {
                let placement: Placement = name.parse()?;
                scenarios.push(Scenario::Preset(ScenarioPreset { placement, n, k }));
            }
        }
        // inline networks not named explicitly still run
        for net in &file.networks {
            if !scenarios.iter().any(|s| s.name() == net.name) {
                scenarios.push(Scenario::Inline(net.clone()));
            }
        }

        let spec = Self {
            scenarios,
            rules,
            trials: flags.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
            master_seed: flags.seed.or(file.master_seed).unwrap_or(DEFAULT_SEED),
            threshold: flags.threshold.or(file.threshold).unwrap_or(DEFAULT_THRESHOLD),
            max_rounds: flags.max_rounds.or(file.max_rounds).unwrap_or(DEFAULT_MAX_ROUNDS),
            output_dir: flags
                .output
                .or(file.output)
                .or(env_output)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
            emit_trajectories: flags.trajectories || file.trajectories.unwrap_or(false),
            initial_beliefs: file.initial_beliefs.unwrap_or_default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(!self.rules.is_empty(), "at least one rule is required");
        ensure!(!self.scenarios.is_empty(), "at least one scenario is required");
        ensure!(self.trials >= 1, "trials must be at least 1");
        ensure!(self.max_rounds >= 1, "max_rounds must be at least 1");
        ensure!(
            self.threshold > 0.0 && self.threshold <= 1.0,
            "threshold {} outside (0, 1]",
            self.threshold
        );
        let mut names: Vec<&str> = self.scenarios.iter().map(Scenario::name).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            bail!("scenario {:?} listed twice", w[0]);
        }
        for s in &self.scenarios {
            s.build().with_context(|| format!("scenario {:?}", s.name()))?;
        }
        Ok(())
    }
}
