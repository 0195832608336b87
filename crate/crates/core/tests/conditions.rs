//! Condition checkers on the reference setup and on hand-built counterexamples.

use distdetect::network::{
    check_conditions, is_primitive, make_ring_lattice, ConditionReport, Network, Topology,
};
use distdetect::scenario::{type_one_model, type_two_model, Placement, ScenarioPreset};
use distdetect::{Belief, RuleKind, StateSpace};
use proptest::prelude::*;

fn reference() -> Network<f64> {
    ScenarioPreset::new(Placement::Mixed).build().unwrap()
}

fn uniform(n: usize) -> Vec<Belief<f64>> {
    vec![Belief::uniform(3); n]
}

fn report(net: &Network<f64>, rule: RuleKind) -> ConditionReport {
    let mut reports = check_conditions(net, rule, &uniform(net.len()), None, None).unwrap();
    assert_eq!(reports.len(), 1);
    reports.remove(0)
}

/// Alternating type-one / type-two agents on the given weights.
fn alternating(weights: Vec<Vec<f64>>) -> Network<f64> {
    let n = weights.len();
    let models = (0..n)
        .map(|i| if i % 2 == 0 { type_one_model().unwrap() } else { type_two_model().unwrap() })
        .collect();
    Network::new(Topology::from_weights(weights).unwrap(), models, StateSpace::numbered(3, 2).unwrap()).unwrap()
}

/// Two disjoint ten-agent ring lattices.
fn disconnected() -> Network<f64> {
    let block = make_ring_lattice::<f64>(10, 5).unwrap();
    let mut w = vec![vec![0.0; 20]; 20];
    for offset in [0, 10] {
        for i in 0..10 {
            for j in 0..10 {
                w[offset + i][offset + j] = block.weight(i, j);
            }
        }
    }
    alternating(w)
}

/// Ring where each agent averages its two neighbors on either side but not itself.
fn no_self_weight() -> Network<f64> {
    let n = 20;
    let w = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            for d in [1, 2, n - 1, n - 2] {
                row[(i + d) % n] = 0.25;
            }
            row
        })
        .collect();
    alternating(w)
}

fn all_type_one() -> Network<f64> {
    let net = reference();
    Network::new(net.topology().clone(), vec![type_one_model().unwrap(); 20], net.states().clone()).unwrap()
}

/// Each agent listens only to its successor: irreducible with period 20.
fn pure_cycle() -> Network<f64> {
    let n = 20;
    let w = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            row[(i + 1) % n] = 1.0;
            row
        })
        .collect();
    alternating(w)
}

#[test]
fn reference_setup_satisfies_every_condition() {
    for placement in Placement::ALL {
        let net: Network<f64> = ScenarioPreset::new(placement).build().unwrap();
        for rule in [RuleKind::LoAB, RuleKind::BLoA, RuleKind::BLiA, RuleKind::BLiAD, RuleKind::BLoAD] {
            let r = report(&net, rule);
            assert!(r.overall, "{rule} on {placement}: failing {:?}", r.failing());
            assert!(!r.informational);
        }
    }
}

#[test]
fn condition_one_at_window_one_matches_default() {
    let net = reference();
    let seq = [net.topology().clone()];
    let explicit = check_conditions(&net, RuleKind::LoAB, &uniform(20), Some(&seq), Some(1)).unwrap();
    assert_eq!(explicit, check_conditions(&net, RuleKind::LoAB, &uniform(20), None, None).unwrap());
    assert!(explicit[0].overall);
    assert_eq!(explicit[0].condition_id, Some(1));
}

#[test]
fn liab_is_informational() {
    let r = report(&reference(), RuleKind::LiAB);
    assert!(r.informational);
    assert_eq!(r.condition_id, None);
}

#[test]
fn bliad_needs_only_one_agent_on_the_truth() {
    let net = reference();
    let mut beliefs = vec![Belief::new(vec![0.5, 0.5, 0.0]).unwrap(); 20];
    beliefs[7] = Belief::uniform(3);
    let r = &check_conditions(&net, RuleKind::BLiAD, &beliefs, None, None).unwrap()[0];
    assert!(r.overall);
    let r = &check_conditions(&net, RuleKind::LoAB, &beliefs, None, None).unwrap()[0];
    assert_eq!(r.failing(), vec![4]);
}

#[test]
fn distinguishability_witness_has_positive_kl() {
    // type-one agent separating theta1 from theta2
    let kl = 0.8 * (0.8f64 / 0.5).ln() + 0.2 * (0.2f64 / 0.5).ln();
    assert!(kl > 0.0);
    let r = report(&reference(), RuleKind::BLoA);
    assert!(r.clause(3).unwrap().holds);
}

#[test]
fn disconnected_graph_breaks_connectivity_only() {
    let net = disconnected();
    assert_eq!(report(&net, RuleKind::BLoA).failing(), vec![1]);
    assert_eq!(report(&net, RuleKind::BLiAD).failing(), vec![1]);
    assert_eq!(report(&net, RuleKind::BLoAD).failing(), vec![1]);
    assert_eq!(report(&net, RuleKind::LoAB).failing(), vec![1]);
}

#[test]
fn zero_self_weight_breaks_self_weight_clause_only() {
    let net = no_self_weight();
    assert_eq!(report(&net, RuleKind::BLiAD).failing(), vec![2]);
    assert_eq!(report(&net, RuleKind::LoAB).failing(), vec![3]);
    let diag = report(&net, RuleKind::BLiAD).clause(2).unwrap().diagnostic.clone();
    assert!(diag.contains("zero self-weight"), "{diag}");
}

#[test]
fn identical_models_break_identifiability_only() {
    let net = all_type_one();
    assert_eq!(report(&net, RuleKind::BLiAD).failing(), vec![4]);
    assert_eq!(report(&net, RuleKind::BLoAD).failing(), vec![3]);
    assert_eq!(report(&net, RuleKind::LoAB).failing(), vec![5]);
    assert_eq!(report(&net, RuleKind::BLoA).failing(), vec![3]);
}

#[test]
fn pure_cycle_breaks_primitivity_only() {
    let net = pure_cycle();
    assert_eq!(report(&net, RuleKind::BLiA).failing(), vec![1]);
}

#[test]
fn argument_errors() {
    let net = reference();
    let seq = [net.topology().clone()];
    assert!(check_conditions(&net, RuleKind::BLoA, &uniform(20), Some(&seq), Some(1)).is_err());
    assert!(check_conditions(&net, RuleKind::BLiA, &uniform(20), None, Some(1)).is_err());
    assert!(check_conditions(&net, RuleKind::LoAB, &uniform(20), None, Some(3)).is_err());
    assert!(check_conditions(&net, RuleKind::LoAB, &uniform(20), Some(&seq), None).is_err());
    assert!(check_conditions(&net, RuleKind::LoAB, &uniform(19), None, None).is_err());
}

#[test]
fn alternating_sequence_is_jointly_connected() {
    // each graph alone is disconnected, the union of consecutive pairs is not
    let n = 4;
    let half = |pairs: &[(usize, usize)]| Topology::<f64>::from_edges(n, pairs).unwrap();
    let a = half(&[(0, 1), (1, 0), (2, 3), (3, 2)]);
    let b = half(&[(1, 2), (2, 1), (3, 0), (0, 3)]);
    let models = vec![type_one_model().unwrap(), type_two_model().unwrap(), type_one_model().unwrap(), type_two_model().unwrap()];
    let net = Network::new(a.clone(), models, StateSpace::numbered(3, 2).unwrap()).unwrap();
    let seq = [a.clone(), b.clone(), a, b];
    let beliefs = uniform(n);
    let joint = &check_conditions(&net, RuleKind::LoAB, &beliefs, Some(&seq), Some(2)).unwrap()[0];
    assert!(joint.overall, "{:?}", joint.failing());
    let single = &check_conditions(&net, RuleKind::LoAB, &beliefs, Some(&seq), Some(1)).unwrap()[0];
    assert_eq!(single.failing(), vec![1]);
}

fn brute_force_primitive(pattern: &[Vec<bool>]) -> bool {
    let n = pattern.len();
    let mul = |a: &[Vec<bool>], b: &[Vec<bool>]| -> Vec<Vec<bool>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
            .collect()
    };
    let mut power = pattern.to_vec();
    for _ in 1..=n * n {
        if power.iter().all(|row| row.iter().all(|&x| x)) {
            return true;
        }
        power = mul(&power, pattern);
    }
    false
}

fn sign_pattern() -> impl Strategy<Value = Vec<Vec<bool>>> {
    (1usize..=6).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.35), n), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn primitivity_matches_brute_force(pattern in sign_pattern()) {
        let weights: Vec<Vec<f64>> = pattern
            .iter()
            .map(|row| row.iter().map(|&b| if b { 0.5 } else { 0.0 }).collect())
            .collect();
        prop_assert_eq!(is_primitive(&weights).unwrap(), brute_force_primitive(&pattern));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn overall_is_conjunction_of_clauses(
        n in 2usize..6,
        edges in prop::collection::vec((0usize..6, 0usize..6), 0..12),
        types in prop::collection::vec(any::<bool>(), 6),
        beliefs in prop::collection::vec(prop::collection::vec(prop_oneof![Just(0.0), 0.1f64..1.0], 3), 6),
    ) {
        let edges: Vec<(usize, usize)> = edges.into_iter().filter(|&(a, b)| a < n && b < n).collect();
        let topology = Topology::<f64>::from_edges(n, &edges).unwrap();
        let models = (0..n)
            .map(|i| if types[i] { type_one_model().unwrap() } else { type_two_model().unwrap() })
            .collect();
        let net = Network::new(topology, models, StateSpace::numbered(3, 2).unwrap()).unwrap();
        let beliefs: Vec<Belief<f64>> = beliefs[..n]
            .iter()
            .map(|raw| {
                let s: f64 = raw.iter().sum();
                if s > 0.0 { Belief::new(raw.iter().map(|x| x / s).collect()).unwrap() } else { Belief::uniform(3) }
            })
            .collect();
        for rule in RuleKind::ALL {
            for r in check_conditions(&net, rule, &beliefs, None, None).unwrap() {
                prop_assert_eq!(r.overall, r.clauses.iter().all(|c| c.holds));
                if r.clauses.iter().any(|c| !c.holds) {
                    prop_assert!(!r.overall);
                }
            }
        }
    }
}

#[test]
fn ring_lattices_are_connected_and_primitive() {
    for n in 3..25 {
        for k in (3..=n).step_by(2) {
            let t = make_ring_lattice::<f64>(n, k).unwrap();
            assert!(distdetect::network::is_strongly_connected(&t));
            assert!(is_primitive(t.weights()).unwrap());
        }
    }
}
