//! Averaging a metric over a batch of scenarios, and ranking algorithms by
//! the batch average.

use rayon::prelude::*;
use serde::Serialize;

use super::bounds::{d_infinity, d_zero};
use super::ospa::ospa2;
use super::schedule::{make_schedule, ScheduleSpec};
use crate::error::{Error, Result};
use crate::exact::exact_metric;
use crate::lp::lp_metric;
use crate::params::{MetricParams, WeightSchedule};
use crate::report::{ErrorReport, MetricKind};
use crate::trajectory::TrajectorySet;

/// Aggregates closer than this are reported as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

pub fn evaluate(
    kind: MetricKind,
    x: &TrajectorySet,
    y: &TrajectorySet,
    params: &MetricParams,
    weights: &WeightSchedule,
) -> Result<ErrorReport> {
    match kind {
        MetricKind::Tm => exact_metric(x, y, params, weights),
        MetricKind::TmLp => lp_metric(x, y, params, weights),
        MetricKind::DZero => d_zero(x, y, params, weights),
        MetricKind::DInfinity => d_infinity(x, y, params, weights),
        MetricKind::Ospa2 => Ok(ErrorReport::scalar(MetricKind::Ospa2, ospa2(x, y, params)?)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchResult {
    /// Metric value of each scenario, in input order.
    pub values: Vec<f64>,
    pub p_prime: f64,
    /// `((1/N) Σ dᵢ^p′)^(1/p′)`
    pub aggregate: f64,
}

/// `p_prime` defaults to `params.p`.
pub fn batch_metric(
    pairs: &[(TrajectorySet, TrajectorySet)],
    kind: MetricKind,
    params: &MetricParams,
    schedule: &ScheduleSpec,
    p_prime: Option<f64>,
) -> Result<BatchResult> {
    if pairs.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let p_prime = p_prime.unwrap_or(params.p);
    if !(p_prime.is_finite() && p_prime >= 1.0) {
        return Err(Error::param("p_prime", format!("must satisfy 1 <= p' < inf, got {p_prime}")));
    }
    let values = pairs
        .par_iter()
        .map(|(x, y)| {
            let weights = make_schedule(schedule, x.window())?;
            Ok(evaluate(kind, x, y, params, &weights)?.total)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(values, p_prime))
}

/// Aggregate of already computed per-scenario values.
pub fn aggregate(values: Vec<f64>, p_prime: f64) -> BatchResult {
    let mean = values.iter().map(|d| d.powf(p_prime)).sum::<f64>() / values.len() as f64;
    BatchResult {
        aggregate: mean.powf(1.0 / p_prime),
        values,
        p_prime,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankEntry {
    pub rank: usize,
    pub name: String,
    pub aggregate: f64,
    /// Tied (within [`TIE_TOLERANCE`]) with the entry ranked just above.
    pub tied_with_previous: bool,
}

/// Ascending by aggregate; tied entries share a rank and are ordered by name.
pub fn rank(results: &[(String, f64)]) -> Vec<RankEntry> {
    let mut sorted: Vec<&(String, f64)> = results.iter().collect();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));

    let mut groups: Vec<Vec<&(String, f64)>> = Vec::new();
    for entry in sorted {
        match groups.last_mut() {
            Some(group) if entry.1 - group[0].1 <= TIE_TOLERANCE => group.push(entry),
            _ => groups.push(vec![entry]),
        }
    }
    let mut out = Vec::with_capacity(results.len());
    for group in &mut groups {
        group.sort_by(|a, b| a.0.cmp(&b.0));
        let rank = out.len() + 1;
        for (n, (name, aggregate)) in group.iter().map(|e| (&e.0, e.1)).enumerate() {
            out.push(RankEntry {
                rank,
                name: name.clone(),
                aggregate,
                tied_with_previous: n > 0,
            });
        }
    }
    out
}
