use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::belief::{Belief, Signal};
use crate::network::Network;
use crate::scalar::Scalar;

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for trial `index` of a stream rooted at `master`: a splitmix64
/// finalizer applied to a per-index counter, so nearby indices and nearby
/// master seeds give unrelated streams.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// How random initial beliefs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialScheme {
    /// Uniform on the simplex, i.e. Dirichlet(1, ..., 1), via normalized
    /// exponential draws.
    #[default]
    UniformSimplex,
    /// Independent uniform [0, 1) entries, then normalized. Not uniform on
    /// the simplex; kept for sensitivity checks.
    NaiveNormalized,
}

/// `n` beliefs over `m` states, uniform on the simplex.
pub fn sample_initial_beliefs<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Vec<Belief<T>> {
    sample_initial_beliefs_with(rng, n, m, InitialScheme::UniformSimplex)
}

pub fn sample_initial_beliefs_with<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    scheme: InitialScheme,
) -> Vec<Belief<T>> {
    (0..n)
        .map(|_| loop {
            let raw: Vec<T> = (0..m)
                .map(|_| {
                    let x: f64 = match scheme {
                        InitialScheme::UniformSimplex => rng.sample(Exp1),
                        InitialScheme::NaiveNormalized => rng.random(),
                    };
                    T::of(x)
                })
                .collect();
            // all-zero draws have probability zero but would not normalize
            if let Some(b) = Belief::normalized(raw) {
                break b;
            }
        })
        .collect()
}

/// Inverse-CDF draw from a distribution over the alphabet, in declared order.
pub fn sample_signal_from_row<T: Scalar, R: Rng + ?Sized>(rng: &mut R, row: &[T]) -> Signal {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    for (s, p) in row.iter().enumerate() {
        cumulative += p.as_f64();
        if u < cumulative {
            return Signal(s);
        }
    }
    // rounding left u above the last partial sum
    Signal(row.iter().rposition(|p| *p > T::zero()).unwrap_or(row.len() - 1))
}

/// One independent signal per agent drawn from its true-state row.
pub fn sample_signals<T: Scalar, R: Rng + ?Sized>(rng: &mut R, net: &Network<T>) -> Vec<Signal> {
    let truth = net.true_index();
    net.models()
        .iter()
        .map(|m| sample_signal_from_row(rng, m.row(truth)))
        .collect()
}
