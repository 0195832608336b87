//! Ring-lattice benchmark scenarios with two complementary agent types.
//!
//! Three states, `theta3` true, two signals. Type-1 agents cannot tell
//! `theta1` from `theta3`; type-2 agents cannot tell `theta2` from
//! `theta3`. Together the truth is identifiable. Placement is either
//! clustered (first half type 1) or mixed (types alternate around the ring).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::belief::{SignalModel, StateSpace};
use crate::error::{Error, Result};
use crate::network::{make_ring_lattice, Network};
use crate::scalar::Scalar;

pub const DEFAULT_AGENTS: usize = 20;
pub const DEFAULT_NEIGHBORHOOD: usize = 5;
pub const SIGNALS: [&str; 2] = ["s1", "s2"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    Clustered,
    Mixed,
}

impl Placement {
    pub const ALL: [Placement; 2] = [Placement::Clustered, Placement::Mixed];

    pub fn name(self) -> &'static str {
        match self {
            Placement::Clustered => "clustered",
            Placement::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "clustered" => Ok(Placement::Clustered),
            "mixed" => Ok(Placement::Mixed),
            _ => Err(Error::UnknownName {
                kind: "scenario",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioPreset {
    pub placement: Placement,
    /// Number of agents; must be even.
    pub n: usize,
    /// Closed neighborhood size on the ring; must be odd.
    pub k: usize,
}

impl ScenarioPreset {
    pub fn new(placement: Placement) -> Self {
        Self {
            placement,
            n: DEFAULT_AGENTS,
            k: DEFAULT_NEIGHBORHOOD,
        }
    }

    /// Whether agent `i` is of type 1 (confuses `theta1` with the truth).
    pub fn is_type_one(&self, i: usize) -> bool {
        match self.placement {
            Placement::Clustered => i < self.n / 2,
            Placement::Mixed => i.is_multiple_of(2),
        }
    }

    /// Topology and signal models for this preset. Deterministic.
    pub fn build<T: Scalar>(&self) -> Result<Network<T>> {
        if self.n == 0 || !self.n.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!("scenario needs an even, positive agent count, got {}", self.n)));
        }
        let topology = make_ring_lattice(self.n, self.k)?;
        let (one, two) = (type_one_model()?, type_two_model()?);
        let models = (0..self.n)
            .map(|i| if self.is_type_one(i) { one.clone() } else { two.clone() })
            .collect();
        Network::new(topology, models, StateSpace::numbered(3, 2)?)
    }
}

fn model<T: Scalar>(rows: [[f64; 2]; 3]) -> Result<SignalModel<T>> {
    SignalModel::new(SIGNALS, rows.iter().map(|r| r.iter().map(|&x| T::of(x)).collect()).collect())
}

/// Rows theta1: (0.8, 0.2), theta2: (0.5, 0.5), theta3: (0.8, 0.2).
pub fn type_one_model<T: Scalar>() -> Result<SignalModel<T>> {
    model([[0.8, 0.2], [0.5, 0.5], [0.8, 0.2]])
}

/// Rows theta1: (0.2, 0.8), theta2: (0.8, 0.2), theta3: (0.8, 0.2).
pub fn type_two_model<T: Scalar>() -> Result<SignalModel<T>> {
    model([[0.2, 0.8], [0.8, 0.2], [0.8, 0.2]])
}

/// Convenience wrapper for [`ScenarioPreset::build`].
pub fn build_scenario<T: Scalar>(preset: &ScenarioPreset) -> Result<Network<T>> {
    preset.build()
}
