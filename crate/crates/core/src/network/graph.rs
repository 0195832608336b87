use crate::error::{Error, Result};
use crate::network::Topology;
use crate::scalar::Scalar;

/// Strong connectivity of `n` nodes given outgoing adjacency lists: every
/// node is reachable from node 0 and reaches node 0.
fn strongly_connected(n: usize, out: &[Vec<usize>]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut incoming = vec![Vec::new(); n];
    for (u, targets) in out.iter().enumerate() {
        for &v in targets {
            incoming[v].push(u);
        }
    }
    reaches_all(0, out) && reaches_all(0, &incoming)
}

fn reaches_all(start: usize, adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == adj.len()
}

fn out_lists(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); n];
    for (from, to) in edges {
        out[from].push(to);
    }
    out
}

/// Every agent's information reaches every other agent along directed edges.
pub fn is_strongly_connected<T: Scalar>(topology: &Topology<T>) -> bool {
    strongly_connected(topology.len(), &out_lists(topology.len(), topology.edges()))
}

/// Every window of `window` consecutive graphs has a strongly connected
/// edge union.
pub fn is_b_strongly_connected<T: Scalar>(sequence: &[Topology<T>], window: usize) -> Result<bool> {
    if sequence.is_empty() {
        return Err(Error::Empty("graph sequence"));
    }
    if window == 0 || window > sequence.len() {
        return Err(Error::WindowTooLarge {
            window,
            len: sequence.len(),
        });
    }
    let n = sequence[0].len();
    if let Some(bad) = sequence.iter().find(|t| t.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    Ok(sequence.windows(window).all(|w| {
        let union = out_lists(n, w.iter().flat_map(Topology::edges));
        strongly_connected(n, &union)
    }))
}

/// Square boolean matrix over the (or, and) semiring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    n: usize,
    cells: Vec<bool>,
}

impl BoolMatrix {
    /// Zero pattern of a nonnegative square matrix: `true` where the entry is positive.
    pub fn pattern<T: Scalar>(matrix: &[Vec<T>]) -> Result<Self> {
        let n = matrix.len();
        let mut cells = Vec::with_capacity(n * n);
        for (row, entries) in matrix.iter().enumerate() {
            if entries.len() != n {
                return Err(Error::NonSquare {
                    rows: n,
                    row,
                    cols: entries.len(),
                });
            }
            cells.extend(entries.iter().map(|&a| a > T::zero()));
        }
        Ok(Self { n, cells })
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n + j]
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.n;
        let mut cells = vec![false; n * n];
        for i in 0..n {
            for k in 0..n {
                if self.get(i, k) {
                    for j in 0..n {
                        cells[i * n + j] |= other.get(k, j);
                    }
                }
            }
        }
        Self { n, cells }
    }

    pub fn all_positive(&self) -> bool {
        self.cells.iter().all(|&c| c)
    }
}

/// Some power of the matrix is entrywise positive.
///
/// Checked at exponent `2^p >= (n-1)^2 + 1` by repeated boolean squaring.
/// Positivity persists under further multiplication once reached, so
/// overshooting the Wielandt bound is harmless.
pub fn is_primitive<T: Scalar>(matrix: &[Vec<T>]) -> Result<bool> {
    let n = matrix.len();
    if n == 0 {
        return Ok(false);
    }
    let wielandt = (n - 1) * (n - 1) + 1;
    let mut power = BoolMatrix::pattern(matrix)?;
    let mut exponent = 1;
    while exponent < wielandt {
        power = power.multiply(&power);
        exponent *= 2;
    }
    Ok(power.all_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::make_ring_lattice;

    fn cycle(n: usize) -> Topology<f64> {
        let weights = (0..n)
            .map(|i| (0..n).map(|j| if j == (i + n - 1) % n { 1.0 } else { 0.0 }).collect())
            .collect();
        Topology::from_weights(weights).unwrap()
    }

    #[test]
    fn ring_lattices_are_connected_and_primitive() {
        for (n, k) in [(20, 5), (7, 3), (3, 3), (2, 1)] {
            let t = make_ring_lattice::<f64>(n, k).unwrap();
            if k >= 3 {
                assert!(is_strongly_connected(&t));
            }
            if k >= 3 || n == 1 {
                assert!(is_primitive(t.weights()).unwrap());
            }
        }
        assert!(!is_strongly_connected(&make_ring_lattice::<f64>(5, 1).unwrap()));
    }

    #[test]
    fn disjoint_cliques_are_not_connected() {
        let mut edges = Vec::new();
        for block in [0..3, 3..6] {
            for i in block.clone() {
                for j in block.clone() {
                    if i != j {
                        edges.push((i, j));
                    }
                }
            }
        }
        let t = Topology::<f64>::from_edges(6, &edges).unwrap();
        assert!(!is_strongly_connected(&t));
    }

    #[test]
    fn directed_three_cycle_is_connected() {
        assert!(is_strongly_connected(&cycle(3)));
        // dropping one arc leaves a path, not a cycle
        let path = Topology::<f64>::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_strongly_connected(&path));
    }

    #[test]
    fn b_strong_connectivity() {
        let forward = Topology::<f64>::from_edges(2, &[(0, 1)]).unwrap();
        let backward = Topology::<f64>::from_edges(2, &[(1, 0)]).unwrap();
        let seq = vec![forward.clone(), backward.clone(), forward, backward];
        assert!(is_b_strongly_connected(&seq, 2).unwrap());
        assert!(!is_b_strongly_connected(&seq, 1).unwrap());

        let lattice = make_ring_lattice::<f64>(10, 3).unwrap();
        let constant = vec![lattice; 4];
        for b in 1..=4 {
            assert!(is_b_strongly_connected(&constant, b).unwrap());
        }

        let empty = vec![Topology::<f64>::from_edges(4, &[]).unwrap(); 3];
        for b in 1..=3 {
            assert!(!is_b_strongly_connected(&empty, b).unwrap());
        }
        assert!(matches!(
            is_b_strongly_connected(&empty, 4),
            Err(Error::WindowTooLarge { window: 4, len: 3 })
        ));
        assert!(is_b_strongly_connected::<f64>(&[], 1).is_err());
    }

    #[test]
    fn primitivity_examples() {
        for n in 2..=6 {
            assert!(!is_primitive(cycle(n).weights()).unwrap(), "cycle of {n} has period {n}");
        }
        let identity: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| f64::from(i == j)).collect()).collect();
        assert!(!is_primitive(&identity).unwrap());
        assert!(is_primitive(&[vec![1.0]]).unwrap());
        assert!(!is_primitive(&[vec![0.0]]).unwrap());
        assert!(matches!(
            is_primitive(&[vec![0.5, 0.5], vec![1.0]]),
            Err(Error::NonSquare { .. })
        ));
        // Wielandt's extremal matrix reaches positivity exactly at (n-1)^2 + 1.
        let n = 5;
        let mut wielandt = vec![vec![0.0; n]; n];
        for i in 0..n - 1 {
            wielandt[i][i + 1] = 1.0;
        }
        wielandt[n - 1][0] = 0.5;
        wielandt[n - 1][1] = 0.5;
        assert!(is_primitive(&wielandt).unwrap());
    }
}
