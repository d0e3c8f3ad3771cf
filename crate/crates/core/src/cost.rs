//! Per-time-step cost matrices `Dᵏ(i, j) = d_G(𝐱ᵢᵏ, 𝐲ⱼᵏ)^p`, kept split into
//! localisation, missed and false parts so that every metric can report its
//! decomposition.

use serde::Serialize;

use crate::error::Result;
use crate::params::MetricParams;
use crate::trajectory::{check_compatible, TargetSlice, TrajectorySet};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct CellCost {
    pub loc: f64,
    pub miss: f64,
    pub false_target: f64,
}

impl CellCost {
    pub fn total(&self) -> f64 {
        self.loc + self.miss + self.false_target
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            loc: self.loc * factor,
            miss: self.miss * factor,
            false_target: self.false_target * factor,
        }
    }
}

impl std::ops::AddAssign for CellCost {
    fn add_assign(&mut self, rhs: Self) {
        self.loc += rhs.loc;
        self.miss += rhs.miss;
        self.false_target += rhs.false_target;
    }
}

/// p-powered GOSPA cost between two sets with at most one element.
///
/// A present pair at distance `>= c` is priced as one missed plus one false
/// target, which is the same total as `min(c, d_b)^p`.
pub fn singleton_cost(x: Option<&[f64]>, y: Option<&[f64]>, params: &MetricParams) -> CellCost {
    let half = params.cutoff_pth() / 2.0;
    match (x, y) {
        (Some(a), Some(b)) => {
            let d = params.base.distance(a, b);
            if d < params.c {
                CellCost {
                    loc: d.powf(params.p),
                    ..CellCost::default()
                }
            } else {
                CellCost {
                    loc: 0.0,
                    miss: half,
                    false_target: half,
                }
            }
        }
        (Some(_), None) => CellCost {
            miss: half,
            ..CellCost::default()
        },
        (None, Some(_)) => CellCost {
            false_target: half,
            ..CellCost::default()
        },
        (None, None) => CellCost::default(),
    }
}

/// `(n_x + 1) × (n_y + 1)` matrix; the last row and column stand for
/// "unassigned".
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    n_x: usize,
    n_y: usize,
    cells: Vec<CellCost>,
}

impl CostMatrix {
    pub fn from_slice(slice: &TargetSlice<'_>, params: &MetricParams) -> Self {
        let (n_x, n_y) = (slice.x.len(), slice.y.len());
        let mut cells = Vec::with_capacity((n_x + 1) * (n_y + 1));
        for i in 0..=n_x {
            let x = slice.x.get(i).copied().flatten();
            for j in 0..=n_y {
                let y = slice.y.get(j).copied().flatten();
                cells.push(singleton_cost(x, y, params));
            }
        }
        Self { n_x, n_y, cells }
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn cell(&self, i: usize, j: usize) -> CellCost {
        self.cells[i * (self.n_y + 1) + j]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.cell(i, j).total()
    }
}

/// One cost matrix per time step of the window.
pub fn cost_matrices(
    x: &TrajectorySet,
    y: &TrajectorySet,
    params: &MetricParams,
) -> Result<Vec<CostMatrix>> {
    check_compatible(x, y)?;
    (1..=x.window())
        .map(|k| Ok(CostMatrix::from_slice(&TargetSlice::at(x, y, k)?, params)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::Trajectory;

    #[test]
    fn cutoff_pair_splits_into_miss_and_false() {
        let params = MetricParams::new(5.0, 1.0, 1.0).unwrap();
        let cost = singleton_cost(Some(&[0.0]), Some(&[7.0]), &params);
        assert_eq!(cost, CellCost { loc: 0.0, miss: 2.5, false_target: 2.5 });
        let near = singleton_cost(Some(&[0.0]), Some(&[3.0]), &params);
        assert_eq!(near.loc, 3.0);
    }

    #[test]
    fn matrix_layout_and_corner() {
        let params = MetricParams::new(2.0, 2.0, 1.0).unwrap();
        let x = TrajectorySet::new(1, vec![Trajectory::contiguous("x", 1, vec![vec![0.0]]).unwrap()]).unwrap();
        let y = TrajectorySet::new(
            1,
            vec![
                Trajectory::contiguous("a", 1, vec![vec![1.0]]).unwrap(),
                Trajectory::contiguous("b", 1, vec![vec![9.0]]).unwrap(),
            ],
        )
        .unwrap();
        let d = &cost_matrices(&x, &y, &params).unwrap()[0];
        assert_eq!((d.n_x(), d.n_y()), (1, 2));
        assert_eq!(d.value(0, 0), 1.0);
        assert_eq!(d.value(0, 1), 4.0);
        assert_eq!(d.value(0, 2), 2.0);
        assert_eq!(d.value(1, 0), 2.0);
        assert_eq!(d.value(1, 2), 0.0);
    }
}
