//! OSPA between target sets and OSPA² between trajectory sets.
//!
//! Both use the cut-off `c`, the order `p` and the base distance of the given
//! [`MetricParams`]; the switching penalty and normalisation are ignored.

use crate::assignment::solve_assignment;
use crate::error::{Error, Result};
use crate::params::MetricParams;
use crate::trajectory::{check_compatible, Trajectory, TrajectorySet};

/// OSPA for an `n × m` problem given pairwise base distances.
fn ospa_from_distances(n: usize, m: usize, distance: impl Fn(usize, usize) -> f64, params: &MetricParams) -> Result<f64> {
    if n == 0 && m == 0 {
        return Ok(0.0);
    }
    if n == 0 || m == 0 {
        return Ok(params.c);
    }
    let cp = params.cutoff_pth();
    let cost: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..m).map(|j| distance(i, j).min(params.c).powf(params.p)).collect())
        .collect();
    // Leaving both ends of a pair open costs 2c^p ≥ any pairing, so the optimum
    // pairs min(n, m) elements and charges c^p for each leftover.
    let matching = solve_assignment(&cost, &vec![cp; n], &vec![cp; m])?;
    let sum = matching.objective / n.max(m) as f64;
    Ok(sum.powf(1.0 / params.p))
}

pub fn ospa<S: AsRef<[f64]>>(x: &[S], y: &[S], params: &MetricParams) -> Result<f64> {
    params.validate()?;
    let mut dims = x.iter().chain(y).map(|s| s.as_ref().len());
    if let Some(first) = dims.next() {
        if let Some(other) = dims.find(|d| *d != first) {
            return Err(Error::DimensionMismatch { left: first, right: other });
        }
    }
    ospa_from_distances(x.len(), y.len(), |i, j| params.base.distance(x[i].as_ref(), y[j].as_ref()), params)
}

/// Time-averaged distance between two trajectories over `1..=window`.
pub fn trajectory_distance(a: &Trajectory, b: &Trajectory, window: usize, params: &MetricParams) -> f64 {
    let sum: f64 = (1..=window)
        .map(|k| match (a.state_at(k), b.state_at(k)) {
            (Some(u), Some(v)) => params.base.distance(u, v).min(params.c).powf(params.p),
            (None, None) => 0.0,
            _ => params.cutoff_pth(),
        })
        .sum();
    (sum / window as f64).powf(1.0 / params.p)
}

pub fn ospa2(x: &TrajectorySet, y: &TrajectorySet, params: &MetricParams) -> Result<f64> {
    params.validate()?;
    check_compatible(x, y)?;
    let window = x.window();
    let (xs, ys) = (x.trajectories(), y.trajectories());
    let distances: Vec<Vec<f64>> = xs
        .iter()
        .map(|a| ys.iter().map(|b| trajectory_distance(a, b, window, params)).collect())
        .collect();
    ospa_from_distances(xs.len(), ys.len(), |i, j| distances[i][j], params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(c: f64, p: f64) -> MetricParams {
        MetricParams::new(c, p, 1.0).unwrap()
    }

    #[test]
    fn empty_cases() {
        let empty: Vec<Vec<f64>> = vec![];
        assert_eq!(ospa(&empty, &empty, &params(5.0, 1.0)).unwrap(), 0.0);
        assert_eq!(ospa(&[vec![1.0]], &empty, &params(5.0, 1.0)).unwrap(), 5.0);
    }

    #[test]
    fn cardinality_penalty() {
        // One pair at distance 1 plus one unmatched target, averaged over 2.
        let v = ospa(&[vec![0.0], vec![50.0]], &[vec![1.0]], &params(5.0, 1.0)).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
        let v = ospa(&[vec![0.0]], &[vec![9.0]], &params(5.0, 2.0)).unwrap();
        assert!((v - 5.0).abs() < 1e-12);
    }

    #[test]
    fn trajectory_distance_with_gaps() {
        let a = Trajectory::new("a", 1, vec![Some(vec![0.0]), None, Some(vec![0.0])]).unwrap();
        let b = Trajectory::contiguous("b", 1, vec![vec![2.0]; 3]).unwrap();
        // Per step: 2, c = 4 (hole), 2, 0 (both gone).
        let d = trajectory_distance(&a, &b, 4, &params(4.0, 1.0));
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn identical_trajectory_sets() {
        let a = Trajectory::contiguous("a", 2, vec![vec![1.0, 2.0]; 3]).unwrap();
        let x = TrajectorySet::new(5, vec![a]).unwrap();
        assert_eq!(ospa2(&x, &x, &params(5.0, 1.0)).unwrap(), 0.0);
    }
}
