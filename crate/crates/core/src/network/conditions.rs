//! Sufficient conditions for the update rules to detect the true state.
//!
//! | condition | rule  | clauses |
//! |-----------|-------|---------|
//! | 1 | LoAB  | B-strongly connected, weights bounded below by eta, positive self-weights, positive belief on the truth everywhere, globally identifiable |
//! | 2 | BLoA  | strongly connected, positive belief on every state everywhere, every state pair distinguished by some agent |
//! | 3 | BLiA  | primitive weights, some agent positive on the truth, prevailing signal for every agent |
//! | 4 | BLiAD | strongly connected, positive self-weights, some agent positive on the truth, globally identifiable |
//! | 5 | BLoAD | strongly connected, positive belief on every state everywhere, globally identifiable |
//!
//! LiAB has no published guarantee. Its report is marked informational and
//! lists connectivity and identifiability only.

use serde::Serialize;

use crate::belief::Belief;
use crate::error::{Error, Result};
use crate::network::graph::{is_b_strongly_connected, is_primitive, is_strongly_connected};
use crate::network::identify::{
    distinguishing_agent, equivalent_intersection, prevailing_signal, DEFAULT_EQUIVALENCE_TOL,
};
use crate::network::{Network, Topology};
use crate::rules::RuleKind;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseVerdict {
    pub clause: u8,
    pub description: &'static str,
    pub holds: bool,
    pub diagnostic: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    /// `None` for rules without a published condition.
    pub condition_id: Option<u8>,
    pub rule: RuleKind,
    pub informational: bool,
    pub clauses: Vec<ClauseVerdict>,
    pub overall: bool,
}

impl ConditionReport {
    fn new(condition_id: Option<u8>, rule: RuleKind, clauses: Vec<ClauseVerdict>) -> Self {
        let overall = clauses.iter().all(|c| c.holds);
        Self {
            condition_id,
            rule,
            informational: condition_id.is_none(),
            clauses,
            overall,
        }
    }

    pub fn clause(&self, clause: u8) -> Option<&ClauseVerdict> {
        self.clauses.iter().find(|c| c.clause == clause)
    }

    /// Clause numbers that fail.
    pub fn failing(&self) -> Vec<u8> {
        self.clauses.iter().filter(|c| !c.holds).map(|c| c.clause).collect()
    }
}

/// Condition number published for `rule`, if any.
pub fn condition_for(rule: RuleKind) -> Option<u8> {
    match rule {
        RuleKind::LoAB => Some(1),
        RuleKind::BLoA => Some(2),
        RuleKind::BLiA => Some(3),
        RuleKind::BLiAD => Some(4),
        RuleKind::BLoAD => Some(5),
        RuleKind::LiAB => None,
    }
}

struct Checker<'a, T> {
    net: &'a Network<T>,
    beliefs: &'a [Belief<T>],
    tol: T,
}

impl<T: Scalar> Checker<'_, T> {
    fn verdict(clause: u8, description: &'static str, holds: bool, diagnostic: String) -> ClauseVerdict {
        ClauseVerdict {
            clause,
            description,
            holds,
            diagnostic,
        }
    }

    fn strongly_connected(&self, clause: u8) -> ClauseVerdict {
        let holds = is_strongly_connected(self.net.topology());
        Self::verdict(
            clause,
            "network is strongly connected",
            holds,
            format!("{} agents, {} directed edges", self.net.len(), self.net.topology().edges().len()),
        )
    }

    fn self_weights(&self, clause: u8, graphs: &[&Topology<T>]) -> ClauseVerdict {
        let offenders: Vec<usize> = (0..self.net.len())
            .filter(|&i| graphs.iter().any(|g| !(g.self_weight(i) > T::zero())))
            .collect();
        Self::verdict(
            clause,
            "all self-weights are positive",
            offenders.is_empty(),
            if offenders.is_empty() {
                "every a_ii > 0".into()
            } else {
                format!("zero self-weight at agents {offenders:?}")
            },
        )
    }

    fn all_positive_on_truth(&self, clause: u8) -> ClauseVerdict {
        let truth = self.net.true_index();
        let offenders: Vec<usize> = (0..self.beliefs.len())
            .filter(|&i| !(self.beliefs[i][truth] > T::zero()))
            .collect();
        Self::verdict(
            clause,
            "every agent has positive initial belief on the true state",
            offenders.is_empty(),
            format!("agents with zero mass on the truth: {offenders:?}"),
        )
    }

    fn some_positive_on_truth(&self, clause: u8) -> ClauseVerdict {
        let truth = self.net.true_index();
        let witness = self.beliefs.iter().position(|b| b[truth] > T::zero());
        Self::verdict(
            clause,
            "some agent has positive initial belief on the true state",
            witness.is_some(),
            match witness {
                Some(i) => format!("agent {i} is positive on the truth"),
                None => "no agent puts mass on the truth".into(),
            },
        )
    }

    fn all_positive_everywhere(&self, clause: u8) -> ClauseVerdict {
        let offender = self
            .beliefs
            .iter()
            .enumerate()
            .find_map(|(i, b)| b.iter().position(|x| !(x > T::zero())).map(|theta| (i, theta)));
        Self::verdict(
            clause,
            "every agent has positive initial belief on every state",
            offender.is_none(),
            match offender {
                Some((i, theta)) => format!("agent {i} has zero mass on state {theta}"),
                None => "all initial beliefs have full support".into(),
            },
        )
    }

    fn globally_identifiable(&self, clause: u8) -> ClauseVerdict {
        let survivors = equivalent_intersection(self.net, self.tol);
        let holds = survivors.len() == 1 && survivors.contains(&self.net.true_index());
        Self::verdict(
            clause,
            "true state is globally identifiable",
            holds,
            format!("states equivalent to the truth for every agent: {survivors:?}"),
        )
    }

    fn pairwise_distinguishable(&self, clause: u8) -> ClauseVerdict {
        let m = self.net.num_states();
        let offender = (0..m)
            .flat_map(|p| (p + 1..m).map(move |q| (p, q)))
            .find(|&(p, q)| distinguishing_agent(self.net, p, q).is_none());
        Self::verdict(
            clause,
            "every pair of states is distinguished by some agent",
            offender.is_none(),
            match offender {
                Some((p, q)) => format!("no agent distinguishes states {p} and {q}"),
                None => "each state pair has an agent with positive KL divergence".into(),
            },
        )
    }

    fn primitive(&self, clause: u8) -> Result<ClauseVerdict> {
        let holds = is_primitive(self.net.topology().weights())?;
        Ok(Self::verdict(
            clause,
            "weight matrix is primitive",
            holds,
            format!("boolean powers checked up to the Wielandt bound for n = {}", self.net.len()),
        ))
    }

    fn prevailing_signals(&self, clause: u8) -> ClauseVerdict {
        let truth = self.net.true_index();
        let per_agent: Vec<_> = self
            .net
            .models()
            .iter()
            .map(|m| prevailing_signal(m, truth, self.tol))
            .collect();
        let (worst_agent, worst) = per_agent
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.margin.partial_cmp(&b.1.margin).unwrap_or(std::cmp::Ordering::Equal))
            .expect("network has agents");
        Self::verdict(
            clause,
            "every agent has a prevailing signal",
            per_agent.iter().all(|p| p.exists()),
            format!(
                "smallest margin delta = {} at agent {worst_agent} (signal {})",
                worst.margin, worst.signal.0
            ),
        )
    }
}

/// Evaluates the published sufficient condition for `rule` on `net` with
/// the given initial beliefs.
///
/// `graph_sequence` and `window` only apply to LoAB. Without them the
/// static network is checked as a sequence of one graph with `B = 1`.
pub fn check_conditions<T: Scalar>(
    net: &Network<T>,
    rule: RuleKind,
    initial_beliefs: &[Belief<T>],
    graph_sequence: Option<&[Topology<T>]>,
    window: Option<usize>,
) -> Result<Vec<ConditionReport>> {
    if initial_beliefs.len() != net.len() {
        return Err(Error::LengthMismatch {
            what: "initial beliefs",
            expected: net.len(),
            found: initial_beliefs.len(),
        });
    }
    for (i, b) in initial_beliefs.iter().enumerate() {
        b.check_dim(net.num_states()).map_err(|e| e.at_agent(i))?;
    }
    let condition = condition_for(rule);
    if condition != Some(1) && (graph_sequence.is_some() || window.is_some()) {
        return Err(Error::ConditionArguments(format!(
            "graph sequences only apply to LoAB, not {rule}"
        )));
    }
    let checker = Checker {
        net,
        beliefs: initial_beliefs,
        tol: T::of(DEFAULT_EQUIVALENCE_TOL),
    };

    let clauses = match condition {
        Some(1) => {
            let static_graph = [net.topology().clone()];
            let (sequence, b) = match (graph_sequence, window) {
                (Some(seq), Some(b)) => (seq, b),
                (None, None) | (None, Some(1)) => (&static_graph[..], 1),
                (None, Some(b)) => {
                    return Err(Error::ConditionArguments(format!(
                        "B = {b} requires a graph sequence"
                    )))
                }
                (Some(_), None) => {
                    return Err(Error::ConditionArguments("graph sequence given without B".into()))
                }
            };
            if let Some(bad) = sequence.iter().find(|g| g.len() != net.len()) {
                return Err(Error::DimensionMismatch {
                    expected: net.len(),
                    found: bad.len(),
                });
            }
            let graphs: Vec<&Topology<T>> = sequence.iter().collect();
            let joint = is_b_strongly_connected(sequence, b)?;
            let eta = graphs
                .iter()
                .filter_map(|g| g.min_positive_weight())
                .fold(None, |acc: Option<T>, a| Some(acc.map_or(a, |m| m.min(a))));
            vec![
                Checker::<T>::verdict(
                    1,
                    "network is B-strongly connected",
                    joint,
                    format!("B = {b} over {} graphs", sequence.len()),
                ),
                Checker::<T>::verdict(
                    2,
                    "positive weights are bounded below by eta > 0",
                    eta.is_some_and(|e| e > T::zero()),
                    match eta {
                        Some(e) => format!("eta = {e}"),
                        None => "no positive weights".into(),
                    },
                ),
                checker.self_weights(3, &graphs),
                checker.all_positive_on_truth(4),
                checker.globally_identifiable(5),
            ]
        }
        Some(2) => vec![
            checker.strongly_connected(1),
            checker.all_positive_everywhere(2),
            checker.pairwise_distinguishable(3),
        ],
        Some(3) => vec![
            checker.primitive(1)?,
            checker.some_positive_on_truth(2),
            checker.prevailing_signals(3),
        ],
        Some(4) => vec![
            checker.strongly_connected(1),
            checker.self_weights(2, &[net.topology()]),
            checker.some_positive_on_truth(3),
            checker.globally_identifiable(4),
        ],
        Some(5) => vec![
            checker.strongly_connected(1),
            checker.all_positive_everywhere(2),
            checker.globally_identifiable(3),
        ],
        _ => vec![checker.strongly_connected(1), checker.globally_identifiable(2)],
    };
    Ok(vec![ConditionReport::new(condition, rule, clauses)])
}
