//! The time-weighted multi-dimensional assignment metric.
//!
//! At every time step the truth trajectories are mapped to estimate
//! trajectories by an assignment vector `πᵏ`. The metric is the p-th root of
//! the cheapest sequence `π¹..πᵀ` under
//!
//! ```text
//! Σₖ w₁ᵏ · stage(πᵏ) + Σₖ w₂ᵏ · γ^p · Σᵢ s(πᵢᵏ, πᵢᵏ⁺¹)
//! ```
//!
//! where `stage` is the GOSPA cost with the target-level assignment fixed by
//! `πᵏ` and `s ∈ {0, ½, 1}` counts full and half track switches. The sequence
//! is found by dynamic programming over a trellis whose states at each step
//! are all assignment vectors.

use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::cluster_split;
use crate::cost::{cost_matrices, CellCost, CostMatrix};
use crate::error::{Error, Result};
use crate::params::{MetricParams, WeightSchedule};
use crate::report::{ErrorReport, MetricKind, StepCosts};
use crate::trajectory::{check_compatible, TargetSlice, TrajectorySet};

/// Largest number of assignment vectors a single trellis may hold.
pub const MAX_TRELLIS_STATES: u128 = 50_000;

/// Largest number of sequences the brute-force evaluator will enumerate.
pub const MAX_BRUTE_FORCE_SEQUENCES: u128 = 10_000_000;

/// Entry `i` is 0 when `Xᵢ` is unassigned and `j ≥ 1` when it is assigned to `Yⱼ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct AssignmentVector(Vec<usize>);

impl AssignmentVector {
    pub fn new(entries: Vec<usize>, n_y: usize) -> Result<Self> {
        let pi = Self(entries);
        pi.validate(pi.0.len(), n_y)?;
        Ok(pi)
    }

    pub fn unassigned(n_x: usize) -> Self {
        Self(vec![0; n_x])
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 0-based index of the estimate assigned to truth `i`.
    pub fn target(&self, i: usize) -> Option<usize> {
        self.0[i].checked_sub(1)
    }

    pub fn validate(&self, n_x: usize, n_y: usize) -> Result<()> {
        if self.0.len() != n_x {
            return Err(Error::InvalidAssignment(format!(
                "length {} for {n_x} trajectories",
                self.0.len()
            )));
        }
        let mut seen = vec![false; n_y + 1];
        for &j in &self.0 {
            if j > n_y {
                return Err(Error::InvalidAssignment(format!("entry {j} exceeds {n_y}")));
            }
            if j > 0 {
                if seen[j] {
                    return Err(Error::InvalidAssignment(format!("entry {j} used twice")));
                }
                seen[j] = true;
            }
        }
        Ok(())
    }
}

/// `|Π|`: the number of assignment vectors between `n_x` and `n_y` trajectories.
pub fn assignment_vector_count(n_x: usize, n_y: usize) -> u128 {
    // Σₖ C(n_x, k) · n_y! / (n_y - k)!
    let mut total: u128 = 0;
    let mut choose: u128 = 1;
    let mut falling: u128 = 1;
    for k in 0..=n_x.min(n_y) {
        if k > 0 {
            choose = choose * (n_x - k + 1) as u128 / k as u128;
            falling = falling.saturating_mul((n_y - k + 1) as u128);
        }
        total = total.saturating_add(choose.saturating_mul(falling));
    }
    total
}

/// All assignment vectors in lexicographic order.
pub fn assignment_vectors(n_x: usize, n_y: usize) -> Vec<AssignmentVector> {
    fn rec(i: usize, n_x: usize, n_y: usize, used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<AssignmentVector>) {
        if i == n_x {
            out.push(AssignmentVector(cur.clone()));
            return;
        }
        for j in 0..=n_y {
            if j > 0 && used[j] {
                continue;
            }
            used[j] = j > 0;
            cur.push(j);
            rec(i + 1, n_x, n_y, used, cur, out);
            cur.pop();
            used[j] = false;
        }
    }
    let mut out = Vec::new();
    rec(0, n_x, n_y, &mut vec![false; n_y + 1], &mut Vec::with_capacity(n_x), &mut out);
    out
}

fn stage_cell(d: &CostMatrix, pi: &AssignmentVector) -> CellCost {
    let (n_x, n_y) = (d.n_x(), d.n_y());
    let mut taken = vec![false; n_y];
    let mut cost = CellCost::default();
    for i in 0..n_x {
        match pi.target(i) {
            Some(j) => {
                taken[j] = true;
                cost += d.cell(i, j);
            }
            None => cost += d.cell(i, n_y),
        }
    }
    for (j, _) in taken.iter().enumerate().filter(|(_, t)| !**t) {
        cost += d.cell(n_x, j);
    }
    cost
}

/// p-powered GOSPA cost at one step with the target-level assignment fixed by
/// `pi`. Assigned pairs where either target is absent, or whose distance is
/// at least `c`, are priced as missed and false targets.
pub fn stage_cost(slice: &TargetSlice<'_>, pi: &AssignmentVector, params: &MetricParams) -> Result<CellCost> {
    pi.validate(slice.x.len(), slice.y.len())?;
    Ok(stage_cell(&CostMatrix::from_slice(slice, params), pi))
}

/// `Σᵢ s(πᵢᵏ, πᵢᵏ⁺¹)` with `s` in {0, ½, 1}.
pub fn switch_units(from: &AssignmentVector, to: &AssignmentVector) -> f64 {
    from.0
        .iter()
        .zip(&to.0)
        .map(|(&a, &b)| {
            if a == b {
                0.0
            } else if a != 0 && b != 0 {
                1.0
            } else {
                0.5
            }
        })
        .sum()
}

/// p-powered switching cost `γ^p · Σᵢ s(πᵢᵏ, πᵢᵏ⁺¹)`.
pub fn switch_cost(from: &AssignmentVector, to: &AssignmentVector, params: &MetricParams) -> Result<f64> {
    if from.len() != to.len() {
        return Err(Error::InvalidAssignment(format!(
            "switch between vectors of length {} and {}",
            from.len(),
            to.len()
        )));
    }
    Ok(params.gamma_pth() * switch_units(from, to))
}

fn check_inputs(x: &TrajectorySet, y: &TrajectorySet, params: &MetricParams, weights: &WeightSchedule) -> Result<()> {
    params.validate()?;
    check_compatible(x, y)?;
    weights.check_window(x.window())
}

/// Weighted, normalised per-step costs of a fixed assignment sequence.
pub(crate) fn trace_steps(
    d: &[CostMatrix],
    trace: &[AssignmentVector],
    params: &MetricParams,
    weights: &WeightSchedule,
) -> Vec<StepCosts> {
    let window = d.len();
    let norm = params.normalization_factor(window);
    let gamma_pth = params.gamma_pth();
    (0..window)
        .map(|k| {
            let cell = stage_cell(&d[k], &trace[k]).scaled(weights.w1()[k]);
            let switch = if k + 1 < window {
                weights.w2()[k] * gamma_pth * switch_units(&trace[k], &trace[k + 1])
            } else {
                0.0
            };
            StepCosts {
                loc: cell.loc,
                miss: cell.miss,
                false_target: cell.false_target,
                switch,
            }
            .scaled(norm)
        })
        .collect()
}

fn check_state_count(n_x: usize, n_y: usize) -> Result<u128> {
    let count = assignment_vector_count(n_x, n_y);
    if count > MAX_TRELLIS_STATES {
        return Err(Error::TooLarge {
            what: "assignment vectors per cluster",
            size: count,
            cap: MAX_TRELLIS_STATES,
        });
    }
    Ok(count)
}

/// Lexicographically smallest optimal trace through the trellis.
fn solve_trellis(
    d: &[CostMatrix],
    n_x: usize,
    n_y: usize,
    params: &MetricParams,
    weights: &WeightSchedule,
) -> Result<Vec<AssignmentVector>> {
    check_state_count(n_x, n_y)?;
    let states = assignment_vectors(n_x, n_y);
    let window = d.len();
    let gamma_pth = params.gamma_pth();
    let stage: Vec<Vec<f64>> = (0..window)
        .map(|k| {
            let w = weights.w1()[k];
            states.iter().map(|s| w * stage_cell(&d[k], s).total()).collect()
        })
        .collect();

    // Backward pass: cost_to_go[k][s] is the cheapest cost of steps k..T
    // given state s at step k.
    let mut cost_to_go = vec![vec![0.0; states.len()]; window];
    cost_to_go[window - 1].clone_from(&stage[window - 1]);
    for k in (0..window - 1).rev() {
        let switch_weight = weights.w2()[k] * gamma_pth;
        let next = &cost_to_go[k + 1];
        let row: Vec<f64> = states
            .par_iter()
            .enumerate()
            .map(|(s, from)| {
                let best = states
                    .iter()
                    .zip(next)
                    .map(|(to, tail)| switch_weight * switch_units(from, to) + tail)
                    .fold(f64::INFINITY, f64::min);
                stage[k][s] + best
            })
            .collect();
        cost_to_go[k] = row;
    }

    let optimum = cost_to_go[0].iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-10 * (1.0 + optimum.abs());
    let mut current = cost_to_go[0]
        .iter()
        .position(|&v| v <= optimum + tol)
        .expect("trellis has at least one state");
    let mut trace = Vec::with_capacity(window);
    trace.push(states[current].clone());
    for k in 0..window - 1 {
        let switch_weight = weights.w2()[k] * gamma_pth;
        let target = cost_to_go[k][current] - stage[k][current];
        let from = &states[current];
        let (next, _) = states
            .iter()
            .enumerate()
            .map(|(s, to)| (s, switch_weight * switch_units(from, to) + cost_to_go[k + 1][s]))
            .find(|&(_, v)| v <= target + tol)
            .or_else(|| {
                states
                    .iter()
                    .enumerate()
                    .map(|(s, to)| (s, switch_weight * switch_units(from, to) + cost_to_go[k + 1][s]))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
            })
            .expect("trellis has at least one state");
        current = next;
        trace.push(states[current].clone());
    }
    Ok(trace)
}

fn finish(kind: MetricKind, steps: Vec<StepCosts>, trace: Vec<AssignmentVector>, params: &MetricParams) -> ErrorReport {
    let mut report = ErrorReport::from_steps(kind, steps, params.p);
    report.assignment_trace = Some(trace);
    report
}

/// The metric solved as one trellis, without splitting into clusters.
pub fn exact_metric_unclustered(
    x: &TrajectorySet,
    y: &TrajectorySet,
    params: &MetricParams,
    weights: &WeightSchedule,
) -> Result<ErrorReport> {
    check_inputs(x, y, params, weights)?;
    let d = cost_matrices(x, y, params)?;
    let trace = solve_trellis(&d, x.len(), y.len(), params, weights)?;
    let steps = trace_steps(&d, &trace, params, weights);
    Ok(finish(MetricKind::Tm, steps, trace, params))
}

/// The time-weighted multi-dimensional assignment metric `d(𝐗, 𝐘)`.
///
/// The problem is first split with [`cluster_split`]; the size cap
/// [`MAX_TRELLIS_STATES`] applies per cluster. The returned trace is optimal
/// and lexicographically smallest within each cluster.
pub fn exact_metric(
    x: &TrajectorySet,
    y: &TrajectorySet,
    params: &MetricParams,
    weights: &WeightSchedule,
) -> Result<ErrorReport> {
    check_inputs(x, y, params, weights)?;
    let clusters = cluster_split(x, y, params)?;
    for cluster in &clusters {
        check_state_count(cluster.x.len(), cluster.y.len())?;
    }
    let solved = clusters
        .par_iter()
        .map(|cluster| {
            let (sx, sy) = cluster.subsets(x, y);
            let d = cost_matrices(&sx, &sy, params)?;
            let trace = solve_trellis(&d, sx.len(), sy.len(), params, weights)?;
            let steps = trace_steps(&d, &trace, params, weights);
            Ok((steps, trace))
        })
        .collect::<Result<Vec<_>>>()?;

    let window = x.window();
    let mut steps = vec![StepCosts::default(); window];
    let mut trace = vec![vec![0usize; x.len()]; window];
    for (cluster, (local_steps, local_trace)) in clusters.iter().zip(solved) {
        for k in 0..window {
            steps[k] += local_steps[k];
            for (li, &gi) in cluster.x.iter().enumerate() {
                if let Some(lj) = local_trace[k].target(li) {
                    trace[k][gi] = cluster.y[lj] + 1;
                }
            }
        }
    }
    let trace = trace.into_iter().map(AssignmentVector).collect();
    Ok(finish(MetricKind::Tm, steps, trace, params))
}

/// Exhaustive evaluation over every sequence of assignment vectors.
///
/// Only meant as a reference for small problems; refuses to run when more
/// than [`MAX_BRUTE_FORCE_SEQUENCES`] sequences would be visited.
pub fn exact_metric_bruteforce(
    x: &TrajectorySet,
    y: &TrajectorySet,
    params: &MetricParams,
    weights: &WeightSchedule,
) -> Result<ErrorReport> {
    check_inputs(x, y, params, weights)?;
    let window = x.window();
    let count = assignment_vector_count(x.len(), y.len());
    let sequences = (0..window).try_fold(1u128, |acc, _| acc.checked_mul(count).filter(|v| *v <= MAX_BRUTE_FORCE_SEQUENCES));
    let Some(_) = sequences else {
        return Err(Error::TooLarge {
            what: "assignment-vector sequences",
            size: count.saturating_pow(window.min(u32::MAX as usize) as u32),
            cap: MAX_BRUTE_FORCE_SEQUENCES,
        });
    };

    let d = cost_matrices(x, y, params)?;
    let states = assignment_vectors(x.len(), y.len());
    let n = states.len();
    let stage: Vec<Vec<f64>> = (0..window)
        .map(|k| states.iter().map(|s| weights.w1()[k] * stage_cell(&d[k], s).total()).collect())
        .collect();
    let units: Vec<Vec<f64>> = states
        .iter()
        .map(|a| states.iter().map(|b| switch_units(a, b)).collect())
        .collect();
    let gamma_pth = params.gamma_pth();

    let mut digits = vec![0usize; window];
    let mut best_digits = digits.clone();
    let mut best = f64::INFINITY;
    loop {
        let mut total = stage[0][digits[0]];
        for k in 1..window {
            total += stage[k][digits[k]] + weights.w2()[k - 1] * gamma_pth * units[digits[k - 1]][digits[k]];
        }
        if best.is_infinite() || total < best - 1e-10 * (1.0 + best.abs()) {
            best = total;
            best_digits.clone_from(&digits);
        }
        // Odometer with step 1 as the most significant digit.
        let mut pos = window;
        loop {
            if pos == 0 {
                let trace: Vec<AssignmentVector> = best_digits.iter().map(|&s| states[s].clone()).collect();
                let steps = trace_steps(&d, &trace, params, weights);
                return Ok(finish(MetricKind::Tm, steps, trace, params));
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < n {
                break;
            }
            digits[pos] = 0;
        }
    }
}
