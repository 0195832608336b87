//! The six consensus-plus-Bayes update rules as one-round operators over a
//! single agent's closed neighborhood.
//!
//! The rules differ along three axes: arithmetic vs. geometric pooling,
//! whether pooling happens before or after the Bayes step, and whether
//! neighbors contribute their fresh posteriors or last round's priors.
//!
//! | rule  | pooled quantity                         | pooling    |
//! |-------|-----------------------------------------|------------|
//! | LoAB  | priors, then Bayes                      | geometric  |
//! | LiAB  | priors, then Bayes                      | arithmetic |
//! | BLoA  | everyone's posteriors                   | geometric  |
//! | BLiA  | everyone's posteriors                   | arithmetic |
//! | BLoAD | own posterior with neighbors' priors    | geometric  |
//! | BLiAD | own posterior with neighbors' priors    | arithmetic |
//!
//! Operators here are neighborhood local. The engine is responsible for
//! computing every agent's posterior before any posterior-pooling rule runs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::belief::{Belief, Signal, SignalModel};
use crate::error::{Error, Result};
use crate::inference::{accumulate_log_pool, bayes_update, check_weights, geometric_mix, linear_mix, softmax};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleKind {
    /// Logarithmic aggregation of priors, then Bayesian update.
    LoAB,
    /// Linear aggregation of priors, then Bayesian update.
    LiAB,
    /// Bayesian update, then logarithmic aggregation of posteriors.
    BLoA,
    /// Bayesian update, then linear aggregation of posteriors.
    BLiA,
    /// Bayesian update, then linear aggregation with neighbors' delayed priors.
    BLiAD,
    /// Bayesian update, then logarithmic aggregation with neighbors' delayed priors.
    BLoAD,
}

impl RuleKind {
    pub const ALL: [RuleKind; 6] = [
        RuleKind::LoAB,
        RuleKind::LiAB,
        RuleKind::BLoA,
        RuleKind::BLiA,
        RuleKind::BLiAD,
        RuleKind::BLoAD,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::LoAB => "LoAB",
            RuleKind::LiAB => "LiAB",
            RuleKind::BLoA => "BLoA",
            RuleKind::BLiA => "BLiA",
            RuleKind::BLiAD => "BLiAD",
            RuleKind::BLoAD => "BLoAD",
        }
    }

    /// Geometric (logarithmic) pooling rather than arithmetic.
    pub fn is_geometric(self) -> bool {
        matches!(self, RuleKind::LoAB | RuleKind::BLoA | RuleKind::BLoAD)
    }

    /// Pools neighbors' same-round posteriors, so every agent's Bayes step
    /// must run first.
    pub fn pools_posteriors(self) -> bool {
        matches!(self, RuleKind::BLoA | RuleKind::BLiA)
    }

    /// Combines the agent's own posterior with neighbors' previous-round priors.
    pub fn is_delayed(self) -> bool {
        matches!(self, RuleKind::BLiAD | RuleKind::BLoAD)
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleKind::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName {
                kind: "rule",
                name: s.to_string(),
            })
    }
}

/// What one agent sees in a round: its own belief and its in-neighbors',
/// the matching row of the weight matrix, and (for posterior-pooling rules)
/// every member's fresh Bayes posterior.
#[derive(Debug, Clone)]
pub struct NeighborhoodView<'a, T> {
    self_index: usize,
    priors: Vec<&'a Belief<T>>,
    weights: Vec<T>,
    posteriors: Option<Vec<&'a Belief<T>>>,
}

impl<'a, T: Scalar> NeighborhoodView<'a, T> {
    pub fn new(self_index: usize, priors: Vec<&'a Belief<T>>, weights: Vec<T>) -> Result<Self> {
        if priors.is_empty() {
            return Err(Error::Empty("neighborhood"));
        }
        if weights.len() != priors.len() {
            return Err(Error::LengthMismatch {
                what: "weights",
                expected: priors.len(),
                found: weights.len(),
            });
        }
        if self_index >= priors.len() {
            return Err(Error::InvalidWeights(format!(
                "self index {self_index} outside neighborhood of size {}",
                priors.len()
            )));
        }
        check_weights(&weights)?;
        let m = priors[0].len();
        for p in &priors {
            p.check_dim(m)?;
        }
        Ok(Self {
            self_index,
            priors,
            weights,
            posteriors: None,
        })
    }

    /// Attaches each member's Bayes posterior, in the same order as the priors.
    pub fn with_posteriors(mut self, posteriors: Vec<&'a Belief<T>>) -> Result<Self> {
        if posteriors.len() != self.priors.len() {
            return Err(Error::LengthMismatch {
                what: "posteriors",
                expected: self.priors.len(),
                found: posteriors.len(),
            });
        }
        let m = self.priors[0].len();
        for p in &posteriors {
            p.check_dim(m)?;
        }
        self.posteriors = Some(posteriors);
        Ok(self)
    }

    pub fn self_index(&self) -> usize {
        self.self_index
    }

    pub fn priors(&self) -> &[&'a Belief<T>] {
        &self.priors
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn self_weight(&self) -> T {
        self.weights[self.self_index]
    }

    pub fn own_prior(&self) -> &'a Belief<T> {
        self.priors[self.self_index]
    }

    pub fn posteriors(&self) -> Result<&[&'a Belief<T>]> {
        self.posteriors
            .as_deref()
            .ok_or(Error::Empty("posteriors (required by posterior-pooling rules)"))
    }
}

/// LoAB: geometric pooling of priors, then the agent's own Bayes step.
pub fn step_loab<T: Scalar>(view: &NeighborhoodView<'_, T>, signal: Signal, model: &SignalModel<T>) -> Result<Belief<T>> {
    let pooled = geometric_mix(view.priors(), view.weights())?;
    bayes_update(&pooled, signal, model)
}

/// LiAB: arithmetic pooling of priors, then the agent's own Bayes step.
pub fn step_liab<T: Scalar>(view: &NeighborhoodView<'_, T>, signal: Signal, model: &SignalModel<T>) -> Result<Belief<T>> {
    let pooled = linear_mix(view.priors(), view.weights())?;
    bayes_update(&pooled, signal, model)
}

/// BLoA: geometric pooling of the members' posteriors.
pub fn step_bloa<T: Scalar>(view: &NeighborhoodView<'_, T>) -> Result<Belief<T>> {
    geometric_mix(view.posteriors()?, view.weights())
}

/// BLoA written as `exp(sum_j a_j ln post_j)` over its normalizer, evaluated
/// literally without max-subtraction. Kept alongside [`step_bloa`] as an
/// independent implementation of the same rule.
pub fn step_bloa_exp_log_form<T: Scalar>(view: &NeighborhoodView<'_, T>) -> Result<Belief<T>> {
    let posteriors = view.posteriors()?;
    let m = posteriors[0].len();
    let numerators: Vec<T> = (0..m)
        .map(|theta| {
            let exponent = posteriors
                .iter()
                .zip(view.weights())
                .filter(|(_, &a)| a > T::zero())
                .map(|(post, &a)| a * post[theta].ln())
                .fold(T::zero(), |acc, x| acc + x);
            exponent.exp()
        })
        .collect();
    let normalizer = numerators.iter().fold(T::zero(), |acc, &x| acc + x);
    if !(normalizer > T::zero()) {
        return Err(Error::DegenerateSupport);
    }
    Belief::normalized(numerators.into_iter().map(|x| x / normalizer).collect()).ok_or(Error::DegenerateSupport)
}

/// BLiA: arithmetic pooling of the members' posteriors.
pub fn step_blia<T: Scalar>(view: &NeighborhoodView<'_, T>) -> Result<Belief<T>> {
    linear_mix(view.posteriors()?, view.weights())
}

/// BLiAD: `a_ii * own posterior + sum_{j != i} a_ij * prior_j`.
pub fn step_bliad<T: Scalar>(view: &NeighborhoodView<'_, T>, signal: Signal, model: &SignalModel<T>) -> Result<Belief<T>> {
    let own = bayes_update(view.own_prior(), signal, model)?;
    let mut members = view.priors().to_vec();
    members[view.self_index()] = &own;
    linear_mix(&members, view.weights())
}

/// BLoAD: normalized `own_posterior^{a_ii} * prod_{j != i} prior_j^{a_ij}`.
pub fn step_bload<T: Scalar>(view: &NeighborhoodView<'_, T>, signal: Signal, model: &SignalModel<T>) -> Result<Belief<T>> {
    let own = bayes_update(view.own_prior(), signal, model)?;
    let mut members = view.priors().to_vec();
    members[view.self_index()] = &own;
    geometric_mix(&members, view.weights())
}

/// Log-linear rule: normalized `exp(lambda ln l(signal|theta) + sum_j a_ij ln prior_j(theta))`.
///
/// With `lambda` equal to the self-weight this coincides with [`step_bload`].
pub fn step_log_linear<T: Scalar>(
    view: &NeighborhoodView<'_, T>,
    signal: Signal,
    model: &SignalModel<T>,
    lambda: T,
) -> Result<Belief<T>> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(Error::InvalidWeights(format!("lambda must be positive, got {lambda}")));
    }
    view.own_prior().check_dim(model.num_states())?;
    let column = model.column(signal)?;
    let mut log_mass: Vec<T> = column.into_iter().map(|l| lambda * l.ln()).collect();
    accumulate_log_pool(&mut log_mass, view.priors().iter().copied().zip(view.weights().iter().copied()));
    softmax(log_mass)
}
