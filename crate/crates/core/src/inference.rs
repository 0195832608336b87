//! Pure belief arithmetic: Bayes' rule, KL divergence, the variational
//! objective whose minimizer is the Bayes posterior, and the two pooling
//! operators (arithmetic and geometric weighted means).
//!
//! Geometric pooling is carried out on log-weights with max-subtraction
//! before exponentiating. Beliefs on rejected states decay geometrically
//! during detection and product-space evaluation underflows quickly.

use crate::belief::{Belief, Signal, SignalModel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Posterior of `prior` after observing `signal` under `model`:
/// `prior(theta) * l(signal | theta)`, renormalized.
pub fn bayes_update<T: Scalar>(prior: &Belief<T>, signal: Signal, model: &SignalModel<T>) -> Result<Belief<T>> {
    prior.check_dim(model.num_states())?;
    let column = model.column(signal)?;
    let joint = prior.iter().zip(column).map(|(p, l)| p * l).collect();
    Belief::normalized(joint).ok_or(Error::DegeneratePrior)
}

/// `D_KL(p || q) = sum p ln(p / q)` with `0 ln 0 = 0`. Returns `+inf` when
/// `p` puts mass where `q` has none.
pub fn kl_divergence<T: Scalar>(p: &Belief<T>, q: &Belief<T>) -> Result<T> {
    p.check_dim(q.len())?;
    Ok(kl_terms(p.as_slice(), q.as_slice()).max(T::zero()))
}

fn kl_terms<T: Scalar>(p: &[T], q: &[T]) -> T {
    let mut total = T::zero();
    for (&pk, &qk) in p.iter().zip(q) {
        if pk > T::zero() {
            if qk <= T::zero() {
                return T::infinity();
            }
            total = total + pk * (pk / qk).ln();
        }
    }
    total
}

/// KL divergence between two rows of raw (possibly unnormalized) weights,
/// used for comparing likelihood rows and for the unnormalized geometric
/// mean identity.
pub fn kl_divergence_raw<T: Scalar>(p: &[T], q: &[T]) -> Result<T> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(kl_terms(p, q))
}

/// Objective minimized by the Bayes posterior over the simplex:
/// `D_KL(candidate || prior) - sum candidate(theta) ln l(signal | theta)`.
pub fn posterior_objective<T: Scalar>(
    candidate: &Belief<T>,
    prior: &Belief<T>,
    signal: Signal,
    model: &SignalModel<T>,
) -> Result<T> {
    candidate.check_dim(prior.len())?;
    prior.check_dim(model.num_states())?;
    let column = model.column(signal)?;
    let divergence = kl_terms(candidate.as_slice(), prior.as_slice());
    let fit: T = candidate
        .iter()
        .zip(column)
        .filter(|(c, _)| *c > T::zero())
        .map(|(c, l)| c * l.ln())
        .sum();
    Ok(divergence - fit)
}

fn check_pool<T: Scalar>(beliefs: &[&Belief<T>], weights: &[T]) -> Result<usize> {
    let first = beliefs.first().ok_or(Error::Empty("belief list"))?;
    if weights.len() != beliefs.len() {
        return Err(Error::LengthMismatch {
            what: "weights",
            expected: beliefs.len(),
            found: weights.len(),
        });
    }
    check_weights(weights)?;
    let m = first.len();
    for b in beliefs {
        b.check_dim(m)?;
    }
    Ok(m)
}

/// Mixing weights must be nonnegative and sum to one within the input tolerance.
pub fn check_weights<T: Scalar>(weights: &[T]) -> Result<()> {
    if let Some(bad) = weights.iter().find(|w| !w.is_finite() || **w < T::zero()) {
        return Err(Error::InvalidWeights(format!("weight {bad} is negative or not finite")));
    }
    let sum: T = weights.iter().copied().sum();
    if (sum - T::one()).abs() > T::input_tolerance() {
        return Err(Error::InvalidWeights(format!("weights sum to {sum}, not 1")));
    }
    Ok(())
}

/// Weighted arithmetic mean of beliefs.
pub fn linear_mix<T: Scalar>(beliefs: &[&Belief<T>], weights: &[T]) -> Result<Belief<T>> {
    let m = check_pool(beliefs, weights)?;
    let mut acc = vec![T::zero(); m];
    for (b, &w) in beliefs.iter().zip(weights) {
        for (a, x) in acc.iter_mut().zip(b.iter()) {
            *a = *a + w * x;
        }
    }
    Belief::normalized(acc).ok_or(Error::DegenerateSupport)
}

/// Weighted geometric mean of beliefs, `prod_j b_j(theta)^{w_j}`, normalized.
///
/// A zero entry in any positively weighted belief is absorbing. Zero-weight
/// members are ignored entirely.
pub fn geometric_mix<T: Scalar>(beliefs: &[&Belief<T>], weights: &[T]) -> Result<Belief<T>> {
    let m = check_pool(beliefs, weights)?;
    let mut log_mass = vec![T::zero(); m];
    accumulate_log_pool(&mut log_mass, beliefs.iter().copied().zip(weights.iter().copied()));
    softmax(log_mass)
}

/// Adds `sum_j w_j ln b_j(theta)` into `acc`, skipping members with zero
/// weight so that `0 * ln 0` never appears.
pub(crate) fn accumulate_log_pool<'a, T: Scalar>(
    acc: &mut [T],
    members: impl Iterator<Item = (&'a Belief<T>, T)>,
) {
    for (b, w) in members {
        if w == T::zero() {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(b.iter()) {
            *a = if x > T::zero() { *a + w * x.ln() } else { T::neg_infinity() };
        }
    }
}

/// Normalized `exp(log_mass)` with max-subtraction. `-inf` entries map to 0.
pub(crate) fn softmax<T: Scalar>(mut log_mass: Vec<T>) -> Result<Belief<T>> {
    let max = log_mass.iter().copied().fold(T::neg_infinity(), T::max);
    if !max.is_finite() {
        return Err(Error::DegenerateSupport);
    }
    for x in &mut log_mass {
        *x = (*x - max).exp();
    }
    Belief::normalized(log_mass).ok_or(Error::DegenerateSupport)
}
