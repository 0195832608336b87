use std::collections::BTreeSet;

use crate::belief::{Signal, SignalModel};
use crate::inference::kl_divergence_raw;
use crate::network::Network;
use crate::scalar::Scalar;

/// Default tolerance for treating two likelihood values as equal.
pub const DEFAULT_EQUIVALENCE_TOL: f64 = 1e-12;

/// States whose likelihood row matches the true state's row within `tol`
/// for every signal. Always contains `true_index`.
pub fn observationally_equivalent_set<T: Scalar>(model: &SignalModel<T>, true_index: usize, tol: T) -> BTreeSet<usize> {
    let truth = model.row(true_index);
    (0..model.num_states())
        .filter(|&theta| {
            theta == true_index
                || model
                    .row(theta)
                    .iter()
                    .zip(truth)
                    .all(|(a, b)| (*a - *b).abs() <= tol)
        })
        .collect()
}

/// Intersection of every agent's observationally equivalent set.
pub fn equivalent_intersection<T: Scalar>(net: &Network<T>, tol: T) -> BTreeSet<usize> {
    let truth = net.true_index();
    net.models()
        .iter()
        .map(|m| observationally_equivalent_set(m, truth, tol))
        .reduce(|acc, set| acc.intersection(&set).copied().collect())
        .unwrap_or_default()
}

/// Only the true state survives the intersection of the agents'
/// observationally equivalent sets.
pub fn is_globally_identifiable<T: Scalar>(net: &Network<T>) -> bool {
    let survivors = equivalent_intersection(net, T::of(DEFAULT_EQUIVALENCE_TOL));
    survivors.len() == 1 && survivors.contains(&net.true_index())
}

/// States whose likelihood rows are closest in KL divergence to the
/// observed signal distribution `true_likelihoods`, keeping every state
/// within `tol` of the minimum.
pub fn closest_states<T: Scalar>(model: &SignalModel<T>, true_likelihoods: &[T], tol: T) -> BTreeSet<usize> {
    let divergences: Vec<T> = model
        .rows()
        .iter()
        .map(|row| kl_divergence_raw(true_likelihoods, row).unwrap_or(T::infinity()))
        .collect();
    let min = divergences.iter().copied().fold(T::infinity(), T::min);
    divergences
        .iter()
        .enumerate()
        .filter(|(_, d)| **d <= min + tol)
        .map(|(theta, _)| theta)
        .collect()
}

/// Intersection over agents of [`closest_states`] computed against each
/// agent's own true-state row.
pub fn common_closest_states<T: Scalar>(net: &Network<T>, tol: T) -> BTreeSet<usize> {
    let truth = net.true_index();
    net.models()
        .iter()
        .map(|m| closest_states(m, m.row(truth), tol))
        .reduce(|acc, set| acc.intersection(&set).copied().collect())
        .unwrap_or_default()
}

/// First agent whose likelihood rows for `p` and `q` have positive KL
/// divergence, if any.
pub fn distinguishing_agent<T: Scalar>(net: &Network<T>, p: usize, q: usize) -> Option<usize> {
    net.models()
        .iter()
        .position(|m| kl_divergence_raw(m.row(p), m.row(q)).is_ok_and(|d| d > T::zero()))
}

/// The signal whose true-state likelihood beats every non-equivalent
/// state's by the widest margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrevailingSignal<T> {
    pub signal: Signal,
    /// `min over non-equivalent theta of l(s | theta*) - l(s | theta)`.
    /// Infinite when every state is equivalent to the truth.
    pub margin: T,
}

impl<T: Scalar> PrevailingSignal<T> {
    pub fn exists(&self) -> bool {
        self.margin > T::zero()
    }
}

pub fn prevailing_signal<T: Scalar>(model: &SignalModel<T>, true_index: usize, tol: T) -> PrevailingSignal<T> {
    let equivalent = observationally_equivalent_set(model, true_index, tol);
    let others: Vec<usize> = (0..model.num_states()).filter(|t| !equivalent.contains(t)).collect();
    (0..model.num_signals())
        .map(|s| {
            let signal = Signal(s);
            let truth = model.likelihood(true_index, signal);
            let margin = others
                .iter()
                .map(|&theta| truth - model.likelihood(theta, signal))
                .fold(T::infinity(), T::min);
            PrevailingSignal { signal, margin }
        })
        .fold(None, |best: Option<PrevailingSignal<T>>, cand| match best {
            Some(b) if b.margin >= cand.margin => Some(b),
            _ => Some(cand),
        })
        .expect("alphabet is never empty")
}
