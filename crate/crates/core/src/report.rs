use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Residuals};
use crate::exact::AssignmentVector;
use crate::lp::SoftAssignment;

/// Weighted (and normalised) p-powered costs attributed to one time step.
///
/// The switching entry of step `k` is the cost of the transition from `k`
/// to `k + 1`; it is always zero at the last step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct StepCosts {
    pub loc: f64,
    pub miss: f64,
    #[serde(rename = "false")]
    pub false_target: f64,
    pub switch: f64,
}

impl StepCosts {
    pub fn total(&self) -> f64 {
        self.loc + self.miss + self.false_target + self.switch
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            loc: self.loc * factor,
            miss: self.miss * factor,
            false_target: self.false_target * factor,
            switch: self.switch * factor,
        }
    }
}

impl std::ops::AddAssign for StepCosts {
    fn add_assign(&mut self, rhs: Self) {
        self.loc += rhs.loc;
        self.miss += rhs.miss;
        self.false_target += rhs.false_target;
        self.switch += rhs.switch;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "tm")]
    Tm,
    #[serde(rename = "tm-lp")]
    TmLp,
    #[serde(rename = "d0")]
    DZero,
    #[serde(rename = "dinf")]
    DInfinity,
    #[serde(rename = "ospa2")]
    Ospa2,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [
        MetricKind::Tm,
        MetricKind::TmLp,
        MetricKind::DZero,
        MetricKind::DInfinity,
        MetricKind::Ospa2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Tm => "tm",
            MetricKind::TmLp => "tm-lp",
            MetricKind::DZero => "d0",
            MetricKind::DInfinity => "dinf",
            MetricKind::Ospa2 => "ospa2",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::param("metric", format!("unknown metric '{s}'")))
    }
}

/// Metric value with its decomposition over time.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub kind: MetricKind,
    pub total: f64,
    /// False for `d⁰`, which ignores track switches and is not a metric.
    pub is_metric: bool,
    /// Empty for metrics without a per-time decomposition (OSPA²).
    pub per_time: Vec<StepCosts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment_trace: Option<Vec<AssignmentVector>>,
    #[serde(skip)]
    pub soft_trace: Option<Vec<SoftAssignment>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Residuals>,
}

impl ErrorReport {
    /// Report whose total is the p-th root of the summed per-time costs.
    pub fn from_steps(kind: MetricKind, per_time: Vec<StepCosts>, p: f64) -> Self {
        let sum: f64 = per_time.iter().map(StepCosts::total).sum();
        Self {
            kind,
            total: sum.max(0.0).powf(1.0 / p),
            is_metric: kind != MetricKind::DZero,
            per_time,
            assignment_trace: None,
            soft_trace: None,
            residuals: None,
        }
    }

    /// Report for a metric without a per-time decomposition.
    pub fn scalar(kind: MetricKind, total: f64) -> Self {
        Self {
            kind,
            total,
            is_metric: kind != MetricKind::DZero,
            per_time: Vec::new(),
            assignment_trace: None,
            soft_trace: None,
            residuals: None,
        }
    }

    pub fn is_decomposed(&self) -> bool {
        !self.per_time.is_empty()
    }

    /// Column sums of the per-time decomposition.
    pub fn components(&self) -> StepCosts {
        let mut sum = StepCosts::default();
        for step in &self.per_time {
            sum += *step;
        }
        sum
    }
}
