//! Lower and upper bound distances `d⁰ ≤ d̄ ≤ d ≤ d^∞`.

use serde::Serialize;

use crate::assignment::solve_assignment;
use crate::cost::cost_matrices;
use crate::error::{Error, Result};
use crate::exact::{exact_metric, trace_steps, AssignmentVector};
use crate::gospa::gospa;
use crate::lp::lp_metric;
use crate::params::{MetricParams, WeightSchedule};
use crate::report::{ErrorReport, MetricKind, StepCosts};
use crate::trajectory::{check_compatible, TrajectorySet};

/// Slack allowed in each link of the inequality chain.
pub const CHAIN_TOLERANCE: f64 = 1e-8;

fn check_inputs(x: &TrajectorySet, y: &TrajectorySet, params: &MetricParams, weights: &WeightSchedule) -> Result<()> {
    params.validate()?;
    check_compatible(x, y)?;
    weights.check_window(x.window())
}

/// Weighted sum of per-step GOSPA costs. Ignores track switches and is
/// therefore not a metric on trajectory sets.
pub fn d_zero(x: &TrajectorySet, y: &TrajectorySet, params: &MetricParams, weights: &WeightSchedule) -> Result<ErrorReport> {
    check_inputs(x, y, params, weights)?;
    let norm = params.normalization_factor(x.window());
    let half = params.cutoff_pth() / 2.0;
    let steps = (1..=x.window())
        .map(|k| {
            let xs: Vec<&[f64]> = x.tau(k)?.into_iter().map(|(_, s)| s).collect();
            let ys: Vec<&[f64]> = y.tau(k)?.into_iter().map(|(_, s)| s).collect();
            let g = gospa(&xs, &ys, params)?;
            let w = weights.loc(k) * norm;
            Ok(StepCosts {
                loc: w * g.loc_pth,
                miss: w * half * g.missed as f64,
                false_target: w * half * g.false_targets as f64,
                switch: 0.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorReport::from_steps(MetricKind::DZero, steps, params.p))
}

/// Best single matching held fixed over the whole window.
pub fn d_infinity(x: &TrajectorySet, y: &TrajectorySet, params: &MetricParams, weights: &WeightSchedule) -> Result<ErrorReport> {
    check_inputs(x, y, params, weights)?;
    let d = cost_matrices(x, y, params)?;
    let (n_x, n_y) = (x.len(), y.len());
    let weighted = |i: usize, j: usize| -> f64 { d.iter().zip(weights.w1()).map(|(dk, w)| w * dk.value(i, j)).sum() };
    let cost: Vec<Vec<f64>> = (0..n_x).map(|i| (0..n_y).map(|j| weighted(i, j)).collect()).collect();
    let rows: Vec<f64> = (0..n_x).map(|i| weighted(i, n_y)).collect();
    let cols: Vec<f64> = (0..n_y).map(|j| weighted(n_x, j)).collect();
    let matching = solve_assignment(&cost, &rows, &cols)?;
    let pi = AssignmentVector::new(
        matching.row_to_col.iter().map(|m| m.map_or(0, |j| j + 1)).collect(),
        n_y,
    )?;
    let trace = vec![pi; x.window()];
    let steps = trace_steps(&d, &trace, params, weights);
    let mut report = ErrorReport::from_steps(MetricKind::DInfinity, steps, params.p);
    report.assignment_trace = Some(trace);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub d_zero: f64,
    pub d_bar: f64,
    pub d: f64,
    pub d_infinity: f64,
}

impl ChainReport {
    /// Whether `d⁰ < d̄` holds with a visible margin.
    pub fn lower_is_strict(&self) -> bool {
        self.d_bar - self.d_zero > CHAIN_TOLERANCE
    }

    /// Whether the relaxation reaches the exact value.
    pub fn relaxation_is_tight(&self) -> bool {
        self.d - self.d_bar <= CHAIN_TOLERANCE
    }
}

/// Computes all four distances and fails if `d⁰ ≤ d̄ ≤ d ≤ d^∞` is broken by
/// more than [`CHAIN_TOLERANCE`].
pub fn check_inequality_chain(
    x: &TrajectorySet,
    y: &TrajectorySet,
    params: &MetricParams,
    weights: &WeightSchedule,
) -> Result<ChainReport> {
    let chain = ChainReport {
        d_zero: d_zero(x, y, params, weights)?.total,
        d_bar: lp_metric(x, y, params, weights)?.total,
        d: exact_metric(x, y, params, weights)?.total,
        d_infinity: d_infinity(x, y, params, weights)?.total,
    };
    let links = [
        ("d0 <= d_bar", chain.d_zero, chain.d_bar),
        ("d_bar <= d", chain.d_bar, chain.d),
        ("d <= d_inf", chain.d, chain.d_infinity),
    ];
    for (name, lower, upper) in links {
        if lower > upper + CHAIN_TOLERANCE {
            return Err(Error::InequalityViolation(format!("{name}: {lower} > {upper}")));
        }
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::Trajectory;

    fn line(label: &str, points: &[f64]) -> Trajectory {
        Trajectory::contiguous(label, 1, points.iter().map(|p| vec![*p]).collect()).unwrap()
    }

    fn swap_instance(window: usize) -> (TrajectorySet, TrajectorySet) {
        let half = window / 2;
        let y1: Vec<f64> = (0..window).map(|k| if k < half { 3.0 } else { 103.0 }).collect();
        let y2: Vec<f64> = (0..window).map(|k| if k < half { 103.0 } else { 3.0 }).collect();
        let x = TrajectorySet::new(window, vec![line("a", &vec![0.0; window]), line("b", &vec![100.0; window])]).unwrap();
        let y = TrajectorySet::new(window, vec![line("c", &y1), line("d", &y2)]).unwrap();
        (x, y)
    }

    #[test]
    fn identical_sets_give_zero_everywhere() {
        let params = MetricParams::new(5.0, 2.0, 1.0).unwrap();
        let x = TrajectorySet::new(3, vec![line("a", &[0.0, 1.0, 2.0])]).unwrap();
        let chain = check_inequality_chain(&x, &x, &params, &WeightSchedule::uniform(3).unwrap()).unwrap();
        assert_eq!(chain, ChainReport { d_zero: 0.0, d_bar: 0.0, d: 0.0, d_infinity: 0.0 });
        assert!(!chain.lower_is_strict());
    }

    #[test]
    fn swap_separates_the_bounds() {
        let params = MetricParams::new(5.0, 1.0, 1.0).unwrap();
        let (x, y) = swap_instance(8);
        let weights = WeightSchedule::uniform(8).unwrap();
        let chain = check_inequality_chain(&x, &y, &params, &weights).unwrap();
        assert!((chain.d_zero - 48.0).abs() < 1e-9);
        assert!((chain.d - 50.0).abs() < 1e-9);
        assert!(chain.d_bar < chain.d_infinity);
        // Keeping the first matching pays c for each of two pairs over the last 4 steps.
        assert!((chain.d_infinity - (24.0 + 40.0)).abs() < 1e-9);
    }

    #[test]
    fn d_zero_is_flagged_as_not_a_metric() {
        let params = MetricParams::new(5.0, 1.0, 10.0).unwrap();
        let (x, y) = swap_instance(4);
        let r = d_zero(&x, &y, &params, &WeightSchedule::uniform(4).unwrap()).unwrap();
        assert!(!r.is_metric);
        assert_eq!(r.components().switch, 0.0);
    }

    #[test]
    fn d_infinity_prices_unmatched_by_presence() {
        let params = MetricParams::new(4.0, 1.0, 1.0).unwrap();
        let x = TrajectorySet::new(3, vec![Trajectory::new("a", 2, vec![Some(vec![0.0]), Some(vec![0.0])]).unwrap()]).unwrap();
        let y = TrajectorySet::empty(3).unwrap();
        let r = d_infinity(&x, &y, &params, &WeightSchedule::uniform(3).unwrap()).unwrap();
        assert_eq!(r.total, 4.0);
        assert_eq!(r.components().miss, 4.0);
    }
}
