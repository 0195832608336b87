//! Value types living on the probability simplex: state sets, beliefs and
//! per-agent signal structures.

use std::collections::HashSet;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered set of candidate states together with the index of the true one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSpace {
    labels: Vec<String>,
    true_index: usize,
}

impl StateSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>, true_index: usize) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::InvalidStateSpace(format!(
                "need at least 2 states, got {}",
                labels.len()
            )));
        }
        let unique: HashSet<&str> = labels.iter().map(String::as_str).collect();
        if unique.len() != labels.len() {
            return Err(Error::InvalidStateSpace("state labels must be unique".into()));
        }
        if true_index >= labels.len() {
            return Err(Error::InvalidStateSpace(format!(
                "true index {true_index} out of range for {} states",
                labels.len()
            )));
        }
        Ok(Self { labels, true_index })
    }

    /// States `theta1..thetam` with the given true index.
    pub fn numbered(m: usize, true_index: usize) -> Result<Self> {
        Self::new((1..=m).map(|k| format!("theta{k}")), true_index)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn true_index(&self) -> usize {
        self.true_index
    }
}

/// Index of a signal inside a [`SignalModel`]'s alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signal(pub usize);

/// A probability distribution over the state set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Belief<T> {
    weights: Vec<T>,
}

impl<T: Scalar> Belief<T> {
    /// Validates a caller-supplied distribution: finite, nonnegative, and
    /// summing to one within [`Scalar::input_tolerance`].
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidBelief("belief has no entries".into()));
        }
        if let Some(bad) = weights.iter().find(|w| !w.is_finite() || **w < T::zero()) {
            return Err(Error::InvalidBelief(format!("entry {bad} is negative or not finite")));
        }
        let sum: T = weights.iter().copied().sum();
        if (sum - T::one()).abs() > T::input_tolerance() {
            return Err(Error::InvalidBelief(format!("entries sum to {sum}, not 1")));
        }
        Ok(Self { weights })
    }

    /// Equal mass on each of `m` states.
    pub fn uniform(m: usize) -> Self {
        let w = T::one() / T::of(m as f64);
        Self { weights: vec![w; m] }
    }

    /// All mass on state `index`.
    pub fn point_mass(m: usize, index: usize) -> Self {
        let mut weights = vec![T::zero(); m];
        weights[index] = T::one();
        Self { weights }
    }

    /// Rescales nonnegative masses to sum to one. Fails when nothing is left
    /// to normalize.
    pub(crate) fn normalized(mut weights: Vec<T>) -> Option<Self> {
        let sum: T = weights.iter().copied().sum();
        if !(sum > T::zero()) || !sum.is_finite() {
            return None;
        }
        for w in &mut weights {
            *w = *w / sum;
        }
        Some(Self { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.weights
    }

    pub fn into_inner(self) -> Vec<T> {
        self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = T> + '_ {
        self.weights.iter().copied()
    }

    pub fn total(&self) -> T {
        self.weights.iter().copied().sum()
    }

    /// L1 distance to another belief of the same dimension.
    pub fn l1_distance(&self, other: &Self) -> T {
        self.iter().zip(other.iter()).map(|(a, b)| (a - b).abs()).sum()
    }

    /// Belief with states reordered so that entry `k` of the result is entry
    /// `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            weights: perm.iter().map(|&k| self.weights[k]).collect(),
        }
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl<T> Index<usize> for Belief<T> {
    type Output = T;

    fn index(&self, index: usize) -> &T {
        &self.weights[index]
    }
}

/// An agent's private likelihood table `l(s | theta)`, stored row per state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalModel<T> {
    alphabet: Vec<String>,
    likelihood: Vec<Vec<T>>,
}

impl<T: Scalar> SignalModel<T> {
    /// `likelihood[state][signal]`. Every entry must be strictly positive and
    /// each state's row must sum to one.
    pub fn new<S: Into<String>>(
        alphabet: impl IntoIterator<Item = S>,
        likelihood: Vec<Vec<T>>,
    ) -> Result<Self> {
        let alphabet: Vec<String> = alphabet.into_iter().map(Into::into).collect();
        if alphabet.is_empty() {
            return Err(Error::InvalidSignalModel("empty alphabet".into()));
        }
        let unique: HashSet<&str> = alphabet.iter().map(String::as_str).collect();
        if unique.len() != alphabet.len() {
            return Err(Error::InvalidSignalModel("signal labels must be unique".into()));
        }
        if likelihood.len() < 2 {
            return Err(Error::InvalidSignalModel(format!(
                "need rows for at least 2 states, got {}",
                likelihood.len()
            )));
        }
        for (state, row) in likelihood.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::InvalidSignalModel(format!(
                    "state {state} has {} likelihoods for {} signals",
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(bad) = row.iter().find(|l| !l.is_finite() || **l <= T::zero()) {
                return Err(Error::InvalidSignalModel(format!(
                    "state {state} has non-positive likelihood {bad}"
                )));
            }
            let sum: T = row.iter().copied().sum();
            if (sum - T::one()).abs() > T::input_tolerance() {
                return Err(Error::InvalidSignalModel(format!(
                    "state {state} likelihoods sum to {sum}, not 1"
                )));
            }
        }
        Ok(Self { alphabet, likelihood })
    }

    pub fn num_states(&self) -> usize {
        self.likelihood.len()
    }

    pub fn num_signals(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn signal(&self, label: &str) -> Result<Signal> {
        self.alphabet
            .iter()
            .position(|s| s == label)
            .map(Signal)
            .ok_or_else(|| Error::UnknownSignalLabel(label.to_string()))
    }

    /// `l(signal | state)`.
    pub fn likelihood(&self, state: usize, signal: Signal) -> T {
        self.likelihood[state][signal.0]
    }

    /// Distribution over the alphabet when `state` holds.
    pub fn row(&self, state: usize) -> &[T] {
        &self.likelihood[state]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.likelihood
    }

    /// Likelihood of `signal` under each state, validated against the alphabet.
    pub fn column(&self, signal: Signal) -> Result<Vec<T>> {
        if signal.0 >= self.num_signals() {
            return Err(Error::UnknownSignal(signal.0));
        }
        Ok(self.likelihood.iter().map(|row| row[signal.0]).collect())
    }

    /// Model with states reordered as in [`Belief::permuted`].
    pub fn permuted_states(&self, perm: &[usize]) -> Self {
        Self {
            alphabet: self.alphabet.clone(),
            likelihood: perm.iter().map(|&k| self.likelihood[k].clone()).collect(),
        }
    }
}
