//! Weighted directed networks of agents and the structural checks that
//! underpin convergence of the update rules.

mod conditions;
mod graph;
mod identify;

pub use conditions::{check_conditions, condition_for, ClauseVerdict, ConditionReport};
pub use graph::{is_b_strongly_connected, is_primitive, is_strongly_connected, BoolMatrix};
pub use identify::{
    closest_states, common_closest_states, distinguishing_agent, equivalent_intersection, is_globally_identifiable,
    observationally_equivalent_set, prevailing_signal, PrevailingSignal, DEFAULT_EQUIVALENCE_TOL,
};

use crate::belief::{SignalModel, StateSpace};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Communication structure: a row-stochastic weight matrix where
/// `weights[i][j] > 0` means agent `i` listens to agent `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology<T> {
    weights: Vec<Vec<T>>,
    closed_neighborhoods: Vec<Vec<usize>>,
}

impl<T: Scalar> Topology<T> {
    /// Validates a square matrix with entries in `[0, 1]` and rows summing to one.
    pub fn from_weights(weights: Vec<Vec<T>>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidTopology("no agents".into()));
        }
        for (i, row) in weights.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare {
                    rows: n,
                    row: i,
                    cols: row.len(),
                });
            }
            if let Some(bad) = row.iter().find(|a| !(**a >= T::zero() && **a <= T::one())) {
                return Err(Error::InvalidTopology(format!("row {i} has weight {bad} outside [0, 1]")));
            }
            let sum: T = row.iter().copied().sum();
            if (sum - T::one()).abs() > T::input_tolerance() {
                return Err(Error::InvalidTopology(format!("row {i} sums to {sum}, not 1")));
            }
        }
        let closed_neighborhoods = weights
            .iter()
            .enumerate()
            .map(|(i, row)| {
                (0..n)
                    .filter(|&j| j == i || row[j] > T::zero())
                    .collect()
            })
            .collect();
        Ok(Self {
            weights,
            closed_neighborhoods,
        })
    }

    /// Uniform weights over each agent's closed in-neighborhood. `edges`
    /// holds `(from, to)` pairs: `to` receives from `from`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut listens = vec![vec![false; n]; n];
        for (i, row) in listens.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(from, to) in edges {
            if from >= n || to >= n {
                return Err(Error::InvalidTopology(format!("edge ({from}, {to}) out of range for {n} agents")));
            }
            listens[to][from] = true;
        }
        let weights = listens
            .into_iter()
            .map(|row| {
                let k = T::of(row.iter().filter(|&&x| x).count() as f64);
                row.into_iter().map(|x| if x { T::one() / k } else { T::zero() }).collect()
            })
            .collect();
        Self::from_weights(weights)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Vec<T>] {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> T {
        self.weights[i][j]
    }

    pub fn self_weight(&self, i: usize) -> T {
        self.weights[i][i]
    }

    /// Agent `i` together with every `j` it receives from, ascending. The
    /// agent itself is always included, even with zero self-weight.
    pub fn closed_neighborhood(&self, i: usize) -> &[usize] {
        &self.closed_neighborhoods[i]
    }

    /// In-neighbors of `i`, excluding `i`.
    pub fn in_neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.closed_neighborhoods[i].iter().copied().filter(move |&j| j != i)
    }

    /// Directed edges `(from, to)` between distinct agents.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| self.in_neighbors(i).map(move |j| (j, i)))
            .collect()
    }

    /// Smallest positive weight.
    pub fn min_positive_weight(&self) -> Option<T> {
        self.weights
            .iter()
            .flatten()
            .copied()
            .filter(|a| *a > T::zero())
            .fold(None, |acc, a| Some(acc.map_or(a, |m: T| m.min(a))))
    }

    /// Whether every column also sums to one.
    pub fn is_doubly_stochastic(&self) -> bool {
        (0..self.len()).all(|j| {
            let sum: T = self.weights.iter().map(|row| row[j]).sum();
            (sum - T::one()).abs() <= T::input_tolerance()
        })
    }

    /// Relabels agents so that new agent `k` is old agent `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let weights = perm
            .iter()
            .map(|&i| perm.iter().map(|&j| self.weights[i][j]).collect())
            .collect();
        Self::from_weights(weights)
    }
}

/// Ring lattice on `n` agents where each agent listens to itself and the
/// `(k - 1) / 2` nearest agents on either side, with uniform weights `1/k`.
pub fn make_ring_lattice<T: Scalar>(n: usize, k: usize) -> Result<Topology<T>> {
    if k.is_multiple_of(2) || k == 0 || k > n {
        return Err(Error::InvalidTopology(format!(
            "ring lattice needs odd k with 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    let reach = (k - 1) / 2;
    let w = T::one() / T::of(k as f64);
    let weights = (0..n)
        .map(|i| {
            let mut row = vec![T::zero(); n];
            for offset in 0..=reach {
                row[(i + offset) % n] = w;
                row[(i + n - offset) % n] = w;
            }
            row
        })
        .collect();
    Topology::from_weights(weights)
}

/// Agents, their communication weights and private signal structures over a
/// shared state space.
#[derive(Debug, Clone, PartialEq)]
pub struct Network<T> {
    topology: Topology<T>,
    models: Vec<SignalModel<T>>,
    states: StateSpace,
}

impl<T: Scalar> Network<T> {
    pub fn new(topology: Topology<T>, models: Vec<SignalModel<T>>, states: StateSpace) -> Result<Self> {
        if models.len() != topology.len() {
            return Err(Error::LengthMismatch {
                what: "signal models",
                expected: topology.len(),
                found: models.len(),
            });
        }
        let alphabet = models[0].alphabet();
        for (i, model) in models.iter().enumerate() {
            if model.num_states() != states.len() {
                return Err(Error::DimensionMismatch {
                    expected: states.len(),
                    found: model.num_states(),
                }
                .at_agent(i));
            }
            if model.alphabet() != alphabet {
                return Err(Error::InvalidSignalModel("agents must share one signal alphabet".into()).at_agent(i));
            }
        }
        Ok(Self {
            topology,
            models,
            states,
        })
    }

    pub fn len(&self) -> usize {
        self.topology.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topology.is_empty()
    }

    pub fn topology(&self) -> &Topology<T> {
        &self.topology
    }

    pub fn models(&self) -> &[SignalModel<T>] {
        &self.models
    }

    pub fn model(&self, agent: usize) -> &SignalModel<T> {
        &self.models[agent]
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn true_index(&self) -> usize {
        self.states.true_index()
    }

    /// Same agents and models under a different communication structure.
    pub fn with_topology(&self, topology: Topology<T>) -> Result<Self> {
        Self::new(topology, self.models.clone(), self.states.clone())
    }

    /// Relabels agents so that new agent `k` is old agent `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        Self::new(
            self.topology.permuted(perm)?,
            perm.iter().map(|&i| self.models[i].clone()).collect(),
            self.states.clone(),
        )
    }
}
