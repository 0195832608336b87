use serde::Serialize;

use crate::belief::{Belief, Signal};
use crate::error::{Error, Result};
use crate::inference::bayes_update;
use crate::network::Network;
use crate::rules::{
    step_blia, step_bliad, step_bload, step_bloa, step_liab, step_loab, step_log_linear, NeighborhoodView, RuleKind,
};
use crate::scalar::Scalar;

/// Every agent's belief at round `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundState<T> {
    pub t: usize,
    pub beliefs: Vec<Belief<T>>,
}

impl<T: Scalar> RoundState<T> {
    pub fn initial(beliefs: Vec<Belief<T>>) -> Self {
        Self { t: 0, beliefs }
    }
}

/// Advances every agent by one synchronous round of `rule`.
pub fn run_round<T: Scalar>(
    state: &RoundState<T>,
    net: &Network<T>,
    rule: RuleKind,
    signals: &[Signal],
) -> Result<RoundState<T>> {
    run_round_with(state, net, rule, signals, None)
}

/// As [`run_round`]; with `lambdas`, BLoAD runs in its log-linear form
/// using `lambdas[i]` as agent `i`'s weight on its own observation.
pub fn run_round_with<T: Scalar>(
    state: &RoundState<T>,
    net: &Network<T>,
    rule: RuleKind,
    signals: &[Signal],
    lambdas: Option<&[T]>,
) -> Result<RoundState<T>> {
    let n = net.len();
    for (what, found) in [("signals", signals.len()), ("beliefs", state.beliefs.len())] {
        if found != n {
            return Err(Error::LengthMismatch { what, expected: n, found });
        }
    }
    if let Some(l) = lambdas {
        if l.len() != n {
            return Err(Error::LengthMismatch {
                what: "lambda overrides",
                expected: n,
                found: l.len(),
            });
        }
    }
    let topology = net.topology();

    // Phase one for posterior-pooling rules: every agent's Bayes posterior
    // from its own round-t belief and its own signal.
    let posteriors = if rule.pools_posteriors() {
        Some(
            (0..n)
                .map(|i| bayes_update(&state.beliefs[i], signals[i], net.model(i)).map_err(|e| e.at_agent(i)))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    let beliefs = (0..n)
        .map(|i| {
            let members = topology.closed_neighborhood(i);
            let self_index = members.iter().position(|&j| j == i).expect("agent is in its own neighborhood");
            let priors = members.iter().map(|&j| &state.beliefs[j]).collect();
            let weights = members.iter().map(|&j| topology.weight(i, j)).collect();
            let mut view = NeighborhoodView::new(self_index, priors, weights)?;
            if let Some(post) = &posteriors {
                view = view.with_posteriors(members.iter().map(|&j| &post[j]).collect())?;
            }
            let (signal, model) = (signals[i], net.model(i));
            match rule {
                RuleKind::LoAB => step_loab(&view, signal, model),
                RuleKind::LiAB => step_liab(&view, signal, model),
                RuleKind::BLoA => step_bloa(&view),
                RuleKind::BLiA => step_blia(&view),
                RuleKind::BLiAD => step_bliad(&view, signal, model),
                RuleKind::BLoAD => match lambdas {
                    Some(l) => step_log_linear(&view, signal, model, l[i]),
                    None => step_bload(&view, signal, model),
                },
            }
            .map_err(|e| e.at_agent(i))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(RoundState { t: state.t + 1, beliefs })
}

/// Every agent's belief on the true state is within `threshold` of one.
pub fn has_converged<T: Scalar>(state: &RoundState<T>, true_index: usize, threshold: T) -> bool {
    state
        .beliefs
        .iter()
        .all(|b| (b[true_index] - T::one()).abs() <= threshold)
}
