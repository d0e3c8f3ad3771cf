//! GOSPA metric (α = 2) between finite sets of single-target states.

use serde::Serialize;

use crate::assignment::solve_assignment;
use crate::error::{Error, Result};
use crate::params::MetricParams;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GospaResult {
    pub total: f64,
    /// Sum of p-powered localisation costs over the assigned pairs.
    pub loc_pth: f64,
    pub missed: usize,
    pub false_targets: usize,
    /// Assigned `(x index, y index)` pairs.
    pub theta: Vec<(usize, usize)>,
}

impl GospaResult {
    /// `loc_pth + (c^p / 2)(missed + false)`, the value before the p-th root.
    pub fn pth(&self, params: &MetricParams) -> f64 {
        self.loc_pth + params.cutoff_pth() / 2.0 * (self.missed + self.false_targets) as f64
    }
}

fn common_dim<S: AsRef<[f64]>>(x: &[S], y: &[S]) -> Result<()> {
    let mut dims = x.iter().chain(y).map(|s| s.as_ref().len());
    if let Some(first) = dims.next() {
        if let Some(other) = dims.find(|d| *d != first) {
            return Err(Error::DimensionMismatch {
                left: first,
                right: other,
            });
        }
    }
    Ok(())
}

pub fn gospa<S: AsRef<[f64]>>(x: &[S], y: &[S], params: &MetricParams) -> Result<GospaResult> {
    params.validate()?;
    common_dim(x, y)?;
    let cp = params.cutoff_pth();
    // Pairs at distance >= c can never beat leaving both unassigned.
    let cost: Vec<Vec<f64>> = x
        .iter()
        .map(|a| {
            y.iter()
                .map(|b| {
                    let d = params.base.distance(a.as_ref(), b.as_ref());
                    if d < params.c {
                        d.powf(params.p)
                    } else {
                        f64::INFINITY
                    }
                })
                .collect()
        })
        .collect();
    let matching = solve_assignment(&cost, &vec![cp / 2.0; x.len()], &vec![cp / 2.0; y.len()])?;
    let theta = matching.pairs();
    let loc_pth = theta.iter().map(|&(i, j)| cost[i][j]).sum::<f64>();
    let missed = x.len() - theta.len();
    let false_targets = y.len() - theta.len();
    let total = (loc_pth + cp / 2.0 * (missed + false_targets) as f64).powf(1.0 / params.p);
    Ok(GospaResult {
        total,
        loc_pth,
        missed,
        false_targets,
        theta,
    })
}

/// GOSPA between two sets of at most one element each.
pub fn gospa_singleton(x: Option<&[f64]>, y: Option<&[f64]>, params: &MetricParams) -> f64 {
    match (x, y) {
        (Some(a), Some(b)) => params.base.distance(a, b).min(params.c),
        (None, None) => 0.0,
        _ => params.c / 2f64.powf(1.0 / params.p),
    }
}
