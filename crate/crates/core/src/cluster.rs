//! Splitting a comparison into independent sub-problems.
//!
//! Trajectories `Xᵢ` and `Yⱼ` are linked when, at some time step, both are
//! present and closer than the cut-off. Connected components of that graph
//! can be solved separately: a pair from different components is never a
//! localisation pair, and unassigning it instead never raises the switching
//! cost, so the p-powered costs of the components simply add up.

use crate::error::Result;
use crate::params::MetricParams;
use crate::trajectory::{check_compatible, TrajectorySet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    /// Indices into the first set, ascending.
    pub x: Vec<usize>,
    /// Indices into the second set, ascending.
    pub y: Vec<usize>,
}

impl Cluster {
    pub fn subsets(&self, x: &TrajectorySet, y: &TrajectorySet) -> (TrajectorySet, TrajectorySet) {
        (x.subset(&self.x), y.subset(&self.y))
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Connected components, ordered by their smallest member (first-set
/// trajectories sort before second-set ones). Trajectories linked to nothing
/// come out as single-member clusters.
pub fn cluster_split(
    x: &TrajectorySet,
    y: &TrajectorySet,
    params: &MetricParams,
) -> Result<Vec<Cluster>> {
    check_compatible(x, y)?;
    let (n_x, n_y) = (x.len(), y.len());
    let mut sets = DisjointSets::new(n_x + n_y);
    for k in 1..=x.window() {
        let xs = x.tau(k)?;
        let ys = y.tau(k)?;
        for &(i, a) in &xs {
            for &(j, b) in &ys {
                if params.base.distance(a, b) < params.c {
                    sets.union(i, n_x + j);
                }
            }
        }
    }
    let mut clusters: Vec<(usize, Cluster)> = Vec::new();
    for node in 0..n_x + n_y {
        let root = sets.find(node);
        let pos = match clusters.iter().position(|(r, _)| *r == root) {
            Some(pos) => pos,
            None => {
                clusters.push((
                    root,
                    Cluster {
                        x: Vec::new(),
                        y: Vec::new(),
                    },
                ));
                clusters.len() - 1
            }
        };
        if node < n_x {
            clusters[pos].1.x.push(node);
        } else {
            clusters[pos].1.y.push(node - n_x);
        }
    }
    Ok(clusters.into_iter().map(|(_, c)| c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::Trajectory;

    fn line(label: &str, pos: f64, window: usize) -> Trajectory {
        Trajectory::contiguous(label, 1, vec![vec![pos]; window]).unwrap()
    }

    #[test]
    fn separated_pairs_form_two_components() {
        let params = MetricParams::new(5.0, 1.0, 10.0).unwrap();
        let x = TrajectorySet::new(3, vec![line("x1", 0.0, 3), line("x2", 100.0, 3)]).unwrap();
        let y = TrajectorySet::new(3, vec![line("y1", 3.0, 3), line("y2", 97.0, 3)]).unwrap();
        let clusters = cluster_split(&x, &y, &params).unwrap();
        assert_eq!(
            clusters,
            vec![Cluster { x: vec![0], y: vec![0] }, Cluster { x: vec![1], y: vec![1] }]
        );
    }

    #[test]
    fn overlapping_sets_form_one_component() {
        let params = MetricParams::new(5.0, 1.0, 10.0).unwrap();
        let x = TrajectorySet::new(2, vec![line("x1", 0.0, 2), line("x2", 1.0, 2)]).unwrap();
        let y = TrajectorySet::new(2, vec![line("y1", 0.5, 2), line("y2", 1.5, 2)]).unwrap();
        assert_eq!(cluster_split(&x, &y, &params).unwrap().len(), 1);
    }

    #[test]
    fn unlinked_trajectories_are_singletons() {
        let params = MetricParams::new(1.0, 1.0, 1.0).unwrap();
        let x = TrajectorySet::new(2, vec![line("x1", 0.0, 2)]).unwrap();
        let y = TrajectorySet::new(2, vec![line("y1", 9.0, 2), line("y2", 0.2, 2)]).unwrap();
        let clusters = cluster_split(&x, &y, &params).unwrap();
        assert_eq!(
            clusters,
            vec![Cluster { x: vec![0], y: vec![1] }, Cluster { x: vec![], y: vec![0] }]
        );
    }

    #[test]
    fn link_at_cutoff_distance_is_not_made() {
        let params = MetricParams::new(5.0, 1.0, 1.0).unwrap();
        let x = TrajectorySet::new(1, vec![line("x", 0.0, 1)]).unwrap();
        let y = TrajectorySet::new(1, vec![line("y", 5.0, 1)]).unwrap();
        assert_eq!(cluster_split(&x, &y, &params).unwrap().len(), 2);
    }
}
