//! Distributed detection in agent networks.
//!
//! Agents hold beliefs over a finite state set, observe private signals, and
//! combine Bayesian updates with consensus over a weighted directed graph.
//! The crate provides the belief arithmetic ([`inference`]), the six update
//! rules ([`rules`]), network construction and convergence-condition checks
//! ([`network`]), a seeded synchronous simulator ([`engine`]) and the ring
//! lattice scenarios used for benchmarking the rules ([`scenario`]).
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

// `!(x > 0)` style checks are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod belief;
pub mod engine;
pub mod error;
pub mod inference;
pub mod network;
pub mod oracle;
pub mod rules;
pub mod scalar;
pub mod scenario;

pub use belief::{Belief, Signal, SignalModel, StateSpace};
pub use error::{Error, Result};
pub use rules::{NeighborhoodView, RuleKind};
pub use scalar::Scalar;

pub type Belief64 = Belief<f64>;
pub type SignalModel64 = SignalModel<f64>;
pub type Network64 = network::Network<f64>;
pub type Topology64 = network::Topology<f64>;
pub type TrialConfig64 = engine::TrialConfig<f64>;
pub type TrialResult64 = engine::TrialResult<f64>;

pub type Belief32 = Belief<f32>;
pub type Network32 = network::Network<f32>;
