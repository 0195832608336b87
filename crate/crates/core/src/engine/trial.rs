use std::sync::Arc;

use serde::Serialize;

use crate::belief::Belief;
use crate::engine::round::{has_converged, run_round_with, RoundState};
use crate::engine::sampling::{rng_from_seed, sample_initial_beliefs_with, sample_signals, InitialScheme};
use crate::error::{Error, Result};
use crate::network::Network;
use crate::rules::RuleKind;
use crate::scalar::Scalar;

pub const DEFAULT_THRESHOLD: f64 = 1e-3;
pub const DEFAULT_MAX_ROUNDS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialBeliefs<T> {
    /// The same beliefs for every trial, one per agent.
    Explicit(Vec<Belief<T>>),
    /// Fresh random beliefs drawn from the trial's RNG.
    Random(InitialScheme),
}

impl<T> Default for InitialBeliefs<T> {
    fn default() -> Self {
        InitialBeliefs::Random(InitialScheme::UniformSimplex)
    }
}

#[derive(Debug, Clone)]
pub struct TrialConfig<T> {
    pub rule: RuleKind,
    pub network: Arc<Network<T>>,
    /// Convergence tolerance on `|belief(truth) - 1|`, in (0, 1].
    pub threshold: T,
    pub max_rounds: usize,
    pub seed: u64,
    pub initial_beliefs: InitialBeliefs<T>,
    /// Per-agent observation weight for the log-linear form of BLoAD.
    pub lambda_overrides: Option<Vec<T>>,
    pub record_trajectory: bool,
}

impl<T: Scalar> TrialConfig<T> {
    /// Defaults: threshold 1e-3, 100000 rounds, simplex-uniform initial beliefs.
    pub fn new(rule: RuleKind, network: impl Into<Arc<Network<T>>>, seed: u64) -> Self {
        Self {
            rule,
            network: network.into(),
            threshold: T::of(DEFAULT_THRESHOLD),
            max_rounds: DEFAULT_MAX_ROUNDS,
            seed,
            initial_beliefs: InitialBeliefs::default(),
            lambda_overrides: None,
            record_trajectory: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > T::zero() && self.threshold <= T::one()) {
            return Err(Error::InvalidConfig(format!("threshold {} outside (0, 1]", self.threshold)));
        }
        if self.max_rounds == 0 {
            return Err(Error::InvalidConfig("max_rounds must be at least 1".into()));
        }
        let (n, m) = (self.network.len(), self.network.num_states());
        if let InitialBeliefs::Explicit(beliefs) = &self.initial_beliefs {
            if beliefs.len() != n {
                return Err(Error::LengthMismatch {
                    what: "initial beliefs",
                    expected: n,
                    found: beliefs.len(),
                });
            }
            for (i, b) in beliefs.iter().enumerate() {
                b.check_dim(m).map_err(|e| e.at_agent(i))?;
            }
        }
        if let Some(lambdas) = &self.lambda_overrides {
            if self.rule != RuleKind::BLoAD {
                return Err(Error::InvalidConfig(format!(
                    "lambda overrides apply to BLoAD only, not {}",
                    self.rule
                )));
            }
            if lambdas.len() != n {
                return Err(Error::LengthMismatch {
                    what: "lambda overrides",
                    expected: n,
                    found: lambdas.len(),
                });
            }
            if let Some(bad) = lambdas.iter().find(|l| !(**l > T::zero()) || !l.is_finite()) {
                return Err(Error::InvalidConfig(format!("lambda {bad} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult<T> {
    pub converged: bool,
    /// Completed rounds at convergence, or `max_rounds` when not converged.
    pub rounds: usize,
    pub final_beliefs: Vec<Belief<T>>,
    /// Beliefs after each round, starting with the initial state.
    pub trajectory: Option<Vec<Vec<Belief<T>>>>,
}

/// Runs one trial to convergence or `max_rounds`. Initial beliefs (when
/// random) are drawn first from the seeded RNG, then one signal per agent
/// per round, so two rules run with the same seed see the same signals.
pub fn run_trial<T: Scalar>(config: &TrialConfig<T>) -> Result<TrialResult<T>> {
    config.validate()?;
    let net = config.network.as_ref();
    let mut rng = rng_from_seed(config.seed);
    let initial = match &config.initial_beliefs {
        InitialBeliefs::Explicit(beliefs) => beliefs.clone(),
        InitialBeliefs::Random(scheme) => sample_initial_beliefs_with(&mut rng, net.len(), net.num_states(), *scheme),
    };
    let mut state = RoundState::initial(initial);
    let mut trajectory = config.record_trajectory.then(|| vec![state.beliefs.clone()]);
    let truth = net.true_index();
    let lambdas = config.lambda_overrides.as_deref();

    let mut converged = has_converged(&state, truth, config.threshold);
    while !converged && state.t < config.max_rounds {
        let signals = sample_signals(&mut rng, net);
        state = run_round_with(&state, net, config.rule, &signals, lambdas)?;
        if let Some(t) = trajectory.as_mut() {
            t.push(state.beliefs.clone());
        }
        converged = has_converged(&state, truth, config.threshold);
    }

    Ok(TrialResult {
        converged,
        rounds: state.t,
        final_beliefs: state.beliefs,
        trajectory,
    })
}
