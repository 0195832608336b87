//! Exhaustive simplex-grid search for the variational form of Bayes' rule.
//!
//! Only meant for desk-scale verification: it enumerates every point of the
//! probability simplex whose coordinates are multiples of the grid step.

use crate::belief::{Belief, Signal, SignalModel};
use crate::error::{Error, Result};
use crate::inference::posterior_objective;
use crate::scalar::Scalar;

/// Largest state count the enumeration accepts.
pub const MAX_ORACLE_STATES: usize = 4;

/// Number of grid cells per unit for `grid_step`, or an error when the step
/// is outside (0, 0.1] or does not divide one.
fn grid_resolution(grid_step: f64) -> Result<usize> {
    if !(grid_step > 0.0 && grid_step <= 0.1 + 1e-12) {
        return Err(Error::InvalidGridStep(grid_step));
    }
    let cells = (1.0 / grid_step).round();
    if (cells * grid_step - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidGridStep(grid_step));
    }
    Ok(cells as usize)
}

/// Calls `visit` on every composition of `total` into `parts` nonnegative
/// integers, in lexicographic order of the leading coordinates.
pub fn for_each_composition(parts: usize, total: usize, mut visit: impl FnMut(&[usize])) {
    fn recurse(prefix: &mut Vec<usize>, parts: usize, remaining: usize, visit: &mut dyn FnMut(&[usize])) {
        if prefix.len() + 1 == parts {
            prefix.push(remaining);
            visit(prefix);
            prefix.pop();
            return;
        }
        for k in 0..=remaining {
            prefix.push(k);
            recurse(prefix, parts, remaining - k, visit);
            prefix.pop();
        }
    }
    if parts == 0 {
        return;
    }
    recurse(&mut Vec::with_capacity(parts), parts, total, &mut visit);
}

/// Every simplex point whose coordinates are multiples of `grid_step`, in
/// enumeration order.
pub fn simplex_grid<T: Scalar>(m: usize, grid_step: f64) -> Result<Vec<Belief<T>>> {
    if m > MAX_ORACLE_STATES {
        return Err(Error::TooManyStates {
            max: MAX_ORACLE_STATES,
            found: m,
        });
    }
    let cells = grid_resolution(grid_step)?;
    let scale = T::of(cells as f64);
    let mut points = Vec::new();
    for_each_composition(m, cells, |counts| {
        let weights = counts.iter().map(|&c| T::of(c as f64) / scale).collect();
        points.push(Belief::normalized(weights).expect("grid point has positive mass"));
    });
    Ok(points)
}

/// Grid point minimizing [`posterior_objective`]. The first minimizer in
/// enumeration order wins ties.
pub fn solve_posterior_bruteforce<T: Scalar>(
    prior: &Belief<T>,
    signal: Signal,
    model: &SignalModel<T>,
    grid_step: f64,
) -> Result<Belief<T>> {
    prior.check_dim(model.num_states())?;
    model.column(signal)?;
    let mut best: Option<(T, Belief<T>)> = None;
    for point in simplex_grid::<T>(prior.len(), grid_step)? {
        let value = posterior_objective(&point, prior, signal, model)?;
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, point));
        }
    }
    Ok(best.expect("grid is never empty").1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::bayes_update;

    fn v1_model() -> SignalModel<f64> {
        SignalModel::new(["s1", "s2"], vec![vec![0.8, 0.2], vec![0.5, 0.5], vec![0.8, 0.2]]).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn grid_has_stars_and_bars_cardinality() {
        for (m, step) in [(2, 0.1f64), (3, 0.05), (4, 0.1), (3, 0.01)] {
            let cells = (1.0 / step).round() as usize;
            let grid = simplex_grid::<f64>(m, step).unwrap();
            assert_eq!(grid.len(), binomial(cells + m - 1, m - 1));
            assert!(grid.iter().all(|p| (p.total() - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let mut seen = Vec::new();
        for_each_composition(3, 2, |c| seen.push(c.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 0, 2],
                vec![0, 1, 1],
                vec![0, 2, 0],
                vec![1, 0, 1],
                vec![1, 1, 0],
                vec![2, 0, 0]
            ]
        );
    }

    #[test]
    fn rejects_bad_arguments() {
        let prior = Belief::<f64>::uniform(5);
        let model = SignalModel::new(["s"], vec![vec![1.0]; 5]).unwrap();
        assert_eq!(
            solve_posterior_bruteforce(&prior, Signal(0), &model, 0.1),
            Err(Error::TooManyStates { max: 4, found: 5 })
        );
        let prior = Belief::<f64>::uniform(3);
        for step in [0.0, 0.2, -0.01, 0.03] {
            assert_eq!(
                solve_posterior_bruteforce(&prior, Signal(0), &v1_model(), step),
                Err(Error::InvalidGridStep(step))
            );
        }
    }

    #[test]
    fn finds_grid_point_nearest_posterior() {
        let prior = Belief::uniform(3);
        let grid_min = solve_posterior_bruteforce(&prior, Signal(0), &v1_model(), 0.01).unwrap();
        let exact = bayes_update(&prior, Signal(0), &v1_model()).unwrap();
        // (8/21, 5/21, 8/21) = (0.38095, 0.23810, 0.38095)
        assert!(grid_min.l1_distance(&exact) <= 0.02, "{grid_min:?}");
        let gap = posterior_objective(&grid_min, &prior, Signal(0), &v1_model()).unwrap()
            - posterior_objective(&exact, &prior, Signal(0), &v1_model()).unwrap();
        assert!((0.0..0.01).contains(&gap), "gap {gap}");
    }

    #[test]
    fn degenerate_prior_maps_to_itself() {
        let prior = Belief::new(vec![0.0, 0.0, 1.0]).unwrap();
        let grid_min = solve_posterior_bruteforce(&prior, Signal(1), &v1_model(), 0.05).unwrap();
        assert_eq!(grid_min.as_slice(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn uninformative_signal_returns_prior_grid_point() {
        let flat = SignalModel::new(["s1", "s2"], vec![vec![0.5, 0.5]; 3]).unwrap();
        let prior = Belief::new(vec![0.2, 0.3, 0.5]).unwrap();
        let grid_min = solve_posterior_bruteforce(&prior, Signal(0), &flat, 0.1).unwrap();
        assert!(grid_min.l1_distance(&prior) < 1e-12);
    }
}
