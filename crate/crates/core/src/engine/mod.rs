//! Seeded synchronous simulation of belief dynamics.
//!
//! A trial draws initial beliefs, then repeats: every agent draws a private
//! signal from its true-state likelihood row, and all agents update from
//! the same round-`t` state. The trial stops once every agent puts at least
//! `1 - threshold` on the true state, or after `max_rounds` rounds.

mod experiment;
mod round;
mod sampling;
mod trial;

pub use experiment::{run_experiment, Experiment, RoundStats, TrialOutcome};
pub use round::{has_converged, run_round, run_round_with, RoundState};
pub use sampling::{
    derive_seed, rng_from_seed, sample_initial_beliefs, sample_initial_beliefs_with, sample_signal_from_row,
    sample_signals, InitialScheme, SimRng,
};
pub use trial::{run_trial, InitialBeliefs, TrialConfig, TrialResult, DEFAULT_MAX_ROUNDS, DEFAULT_THRESHOLD};
