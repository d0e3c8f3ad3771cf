//! Linear-programming relaxation `d̄` of the trajectory metric.
//!
//! Assignment vectors are replaced by soft assignment matrices `Wᵏ` of shape
//! `(n_x + 1) × (n_y + 1)`: rows and columns of real trajectories sum to one,
//! the dummy corner is zero and all entries are non-negative. Track switches
//! are charged through slack variables `eᵏ(i, j) ≥ |Wᵏ(i, j) − Wᵏ⁺¹(i, j)|`.

mod format;
mod solver;

use rayon::prelude::*;
use serde::Serialize;

pub use format::to_lp_format;
pub use solver::{solve_lp, LpSolution, RESIDUAL_TOLERANCE};

use crate::cluster::cluster_split;
use crate::cost::{cost_matrices, CostMatrix};
use crate::error::{Error, Residuals, Result};
use crate::exact::AssignmentVector;
use crate::params::{MetricParams, WeightSchedule};
use crate::report::{ErrorReport, MetricKind, StepCosts};
use crate::trajectory::{check_compatible, TrajectorySet};

/// Soft assignment matrix; index `n_x` (row) and `n_y` (column) is the dummy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SoftAssignment {
    n_x: usize,
    n_y: usize,
    data: Vec<f64>,
}

impl SoftAssignment {
    pub fn zeros(n_x: usize, n_y: usize) -> Self {
        Self {
            n_x,
            n_y,
            data: vec![0.0; (n_x + 1) * (n_y + 1)],
        }
    }

    /// Row-major values, `(n_x + 1)(n_y + 1)` of them.
    pub fn from_values(n_x: usize, n_y: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != (n_x + 1) * (n_y + 1) {
            return Err(Error::DimensionMismatch {
                left: (n_x + 1) * (n_y + 1),
                right: data.len(),
            });
        }
        Ok(Self { n_x, n_y, data })
    }

    /// The 0/1 matrix of an assignment vector.
    pub fn from_assignment_vector(pi: &AssignmentVector, n_y: usize) -> Result<Self> {
        pi.validate(pi.len(), n_y)?;
        let mut w = Self::zeros(pi.len(), n_y);
        let mut taken = vec![false; n_y];
        for i in 0..pi.len() {
            match pi.target(i) {
                Some(j) => {
                    w.set(i, j, 1.0);
                    taken[j] = true;
                }
                None => w.set(i, n_y, 1.0),
            }
        }
        for (j, t) in taken.into_iter().enumerate() {
            if !t {
                w.set(pi.len(), j, 1.0);
            }
        }
        Ok(w)
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.n_y + 1) + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * (self.n_y + 1) + j] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    /// Largest violation of the row, column, corner and sign constraints.
    pub fn constraint_violation(&self) -> f64 {
        let rows = (0..self.n_x).map(|i| ((0..=self.n_y).map(|j| self.get(i, j)).sum::<f64>() - 1.0).abs());
        let cols = (0..self.n_y).map(|j| ((0..=self.n_x).map(|i| self.get(i, j)).sum::<f64>() - 1.0).abs());
        let sign = self.data.iter().map(|v| (-v).max(0.0));
        rows.chain(cols)
            .chain(sign)
            .chain(std::iter::once(self.get(self.n_x, self.n_y).abs()))
            .fold(0.0, f64::max)
    }

    pub fn is_feasible(&self, tol: f64) -> bool {
        self.constraint_violation() <= tol
    }
}

/// `terms · v ≥ rhs` or `= rhs`, with sparse `(variable, coefficient)` terms.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRow {
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// Minimise `objective · v` subject to `equalities`, `inequalities` (all `≥`)
/// and `v ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub n_x: usize,
    pub n_y: usize,
    pub window: usize,
    pub objective: Vec<f64>,
    pub equalities: Vec<LinearRow>,
    pub inequalities: Vec<LinearRow>,
}

impl LpProblem {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Index of `Wᵏ(i, j)`, `k` 0-based.
    pub fn assignment_var(&self, k: usize, i: usize, j: usize) -> usize {
        k * (self.n_x + 1) * (self.n_y + 1) + i * (self.n_y + 1) + j
    }

    /// Index of `eᵏ(i, j)`, the switch slack between steps `k` and `k + 1`.
    pub fn slack_var(&self, k: usize, i: usize, j: usize) -> usize {
        self.window * (self.n_x + 1) * (self.n_y + 1) + k * self.n_x * self.n_y + i * self.n_y + j
    }
}

fn check_inputs(x: &TrajectorySet, y: &TrajectorySet, params: &MetricParams, weights: &WeightSchedule) -> Result<()> {
    params.validate()?;
    check_compatible(x, y)?;
    weights.check_window(x.window())
}

fn build_from_matrices(d: &[CostMatrix], params: &MetricParams, weights: &WeightSchedule) -> LpProblem {
    let window = d.len();
    let (n_x, n_y) = (d[0].n_x(), d[0].n_y());
    let block = (n_x + 1) * (n_y + 1);
    let n_vars = window * block + window.saturating_sub(1) * n_x * n_y;
    let mut lp = LpProblem {
        n_x,
        n_y,
        window,
        objective: vec![0.0; n_vars],
        equalities: Vec::new(),
        inequalities: Vec::new(),
    };
    let half_gamma = params.gamma_pth() / 2.0;
    for (k, dk) in d.iter().enumerate() {
        for i in 0..=n_x {
            for j in 0..=n_y {
                let v = lp.assignment_var(k, i, j);
                lp.objective[v] = weights.w1()[k] * dk.value(i, j);
            }
        }
        for i in 0..n_x {
            let terms = (0..=n_y).map(|j| (lp.assignment_var(k, i, j), 1.0)).collect();
            lp.equalities.push(LinearRow { terms, rhs: 1.0 });
        }
        for j in 0..n_y {
            let terms = (0..=n_x).map(|i| (lp.assignment_var(k, i, j), 1.0)).collect();
            lp.equalities.push(LinearRow { terms, rhs: 1.0 });
        }
        lp.equalities.push(LinearRow {
            terms: vec![(lp.assignment_var(k, n_x, n_y), 1.0)],
            rhs: 0.0,
        });
        if k + 1 < window {
            for i in 0..n_x {
                for j in 0..n_y {
                    let e = lp.slack_var(k, i, j);
                    lp.objective[e] = half_gamma * weights.w2()[k];
                    let (now, next) = (lp.assignment_var(k, i, j), lp.assignment_var(k + 1, i, j));
                    for sign in [1.0, -1.0] {
                        lp.inequalities.push(LinearRow {
                            terms: vec![(e, 1.0), (now, -sign), (next, sign)],
                            rhs: 0.0,
                        });
                    }
                }
            }
        }
    }
    lp
}

/// The relaxation as an explicit LP over the whole problem (no clustering).
pub fn build_lp(
    x: &TrajectorySet,
    y: &TrajectorySet,
    params: &MetricParams,
    weights: &WeightSchedule,
) -> Result<LpProblem> {
    check_inputs(x, y, params, weights)?;
    Ok(build_from_matrices(&cost_matrices(x, y, params)?, params, weights))
}

fn check_shapes(d: &[CostMatrix], w: &[SoftAssignment]) -> Result<()> {
    if w.len() != d.len() {
        return Err(Error::WindowMismatch {
            left: d.len(),
            right: w.len(),
        });
    }
    for (dk, wk) in d.iter().zip(w) {
        if (wk.n_x, wk.n_y) != (dk.n_x(), dk.n_y()) {
            return Err(Error::DimensionMismatch {
                left: dk.n_x() * (dk.n_y() + 1),
                right: wk.n_x * (wk.n_y + 1),
            });
        }
    }
    Ok(())
}

/// Weighted, normalised per-step costs of a soft assignment sequence.
fn soft_steps(d: &[CostMatrix], w: &[SoftAssignment], params: &MetricParams, weights: &WeightSchedule) -> Vec<StepCosts> {
    let window = d.len();
    let norm = params.normalization_factor(window);
    let half_gamma = params.gamma_pth() / 2.0;
    (0..window)
        .map(|k| {
            let (n_x, n_y) = (d[k].n_x(), d[k].n_y());
            let mut step = StepCosts::default();
            for i in 0..=n_x {
                for j in 0..=n_y {
                    let cell = d[k].cell(i, j).scaled(w[k].get(i, j));
                    step.loc += cell.loc;
                    step.miss += cell.miss;
                    step.false_target += cell.false_target;
                }
            }
            step = step.scaled(weights.w1()[k]);
            if k + 1 < window {
                let mut moved = 0.0;
                for i in 0..n_x {
                    for j in 0..n_y {
                        moved += (w[k].get(i, j) - w[k + 1].get(i, j)).abs();
                    }
                }
                step.switch = half_gamma * weights.w2()[k] * moved;
            }
            step.scaled(norm)
        })
        .collect()
}

/// p-powered objective (after normalisation, before the root) of a given
/// soft assignment sequence.
pub fn lp_objective(
    x: &TrajectorySet,
    y: &TrajectorySet,
    params: &MetricParams,
    weights: &WeightSchedule,
    w: &[SoftAssignment],
) -> Result<f64> {
    check_inputs(x, y, params, weights)?;
    let d = cost_matrices(x, y, params)?;
    check_shapes(&d, w)?;
    Ok(soft_steps(&d, w, params, weights).iter().map(StepCosts::total).sum())
}

fn solve_part(
    x: &TrajectorySet,
    y: &TrajectorySet,
    params: &MetricParams,
    weights: &WeightSchedule,
) -> Result<(Vec<StepCosts>, Vec<SoftAssignment>, Residuals)> {
    let d = cost_matrices(x, y, params)?;
    let (w, residuals) = if x.is_empty() || y.is_empty() {
        // Nothing can be paired: every trajectory sits in a dummy slot.
        let pi = AssignmentVector::unassigned(x.len());
        let w = SoftAssignment::from_assignment_vector(&pi, y.len())?;
        (vec![w; x.window()], Residuals::default())
    } else {
        let solution = solve_lp(&build_from_matrices(&d, params, weights))?;
        (solution.assignments, solution.residuals)
    };
    Ok((soft_steps(&d, &w, params, weights), w, residuals))
}

fn finish(steps: Vec<StepCosts>, w: Vec<SoftAssignment>, residuals: Residuals, params: &MetricParams) -> ErrorReport {
    let mut report = ErrorReport::from_steps(MetricKind::TmLp, steps, params.p);
    report.soft_trace = Some(w);
    report.residuals = Some(residuals);
    report
}

/// `d̄` solved as a single LP.
pub fn lp_metric_unclustered(
    x: &TrajectorySet,
    y: &TrajectorySet,
    params: &MetricParams,
    weights: &WeightSchedule,
) -> Result<ErrorReport> {
    check_inputs(x, y, params, weights)?;
    let (steps, w, residuals) = solve_part(x, y, params, weights)?;
    Ok(finish(steps, w, residuals, params))
}

/// The LP relaxation `d̄(𝐗, 𝐘)`, solved cluster by cluster.
///
/// The report carries the solver residuals (worst over clusters) and the
/// assembled soft assignment matrices in `soft_trace`.
pub fn lp_metric(
    x: &TrajectorySet,
    y: &TrajectorySet,
    params: &MetricParams,
    weights: &WeightSchedule,
) -> Result<ErrorReport> {
    check_inputs(x, y, params, weights)?;
    let clusters = cluster_split(x, y, params)?;
    let solved = clusters
        .par_iter()
        .map(|cluster| {
            let (sx, sy) = cluster.subsets(x, y);
            solve_part(&sx, &sy, params, weights)
        })
        .collect::<Result<Vec<_>>>()?;

    let window = x.window();
    let (n_x, n_y) = (x.len(), y.len());
    let mut steps = vec![StepCosts::default(); window];
    let mut w = vec![SoftAssignment::zeros(n_x, n_y); window];
    let mut residuals = Residuals::default();
    for (cluster, (local_steps, local_w, local_res)) in clusters.iter().zip(solved) {
        residuals.primal_infeasibility = residuals.primal_infeasibility.max(local_res.primal_infeasibility);
        residuals.duality_gap = residuals.duality_gap.max(local_res.duality_gap);
        let (cx, cy) = (cluster.x.len(), cluster.y.len());
        for k in 0..window {
            steps[k] += local_steps[k];
            for (li, &gi) in cluster.x.iter().enumerate() {
                for (lj, &gj) in cluster.y.iter().enumerate() {
                    w[k].set(gi, gj, local_w[k].get(li, lj));
                }
                w[k].set(gi, n_y, local_w[k].get(li, cy));
            }
            for (lj, &gj) in cluster.y.iter().enumerate() {
                w[k].set(n_x, gj, local_w[k].get(cx, lj));
            }
        }
    }
    Ok(finish(steps, w, residuals, params))
}

/// Composition of `W_xz` (`X` against `Z`) with `W_zy` (`Z` against `Y`):
/// interior entries chain through real `Z` trajectories, dummy entries are
/// whatever keeps the row and column sums at one.
pub fn compose_soft_assignments(w_xz: &SoftAssignment, w_zy: &SoftAssignment) -> Result<SoftAssignment> {
    if w_xz.n_y != w_zy.n_x {
        return Err(Error::DimensionMismatch {
            left: w_xz.n_y,
            right: w_zy.n_x,
        });
    }
    let (n_x, n_z, n_y) = (w_xz.n_x, w_xz.n_y, w_zy.n_y);
    let mut out = SoftAssignment::zeros(n_x, n_y);
    for i in 0..n_x {
        for j in 0..n_y {
            let v = (0..n_z).map(|l| w_xz.get(i, l) * w_zy.get(l, j)).sum();
            out.set(i, j, v);
        }
    }
    for i in 0..n_x {
        let row: f64 = (0..n_y).map(|j| out.get(i, j)).sum();
        out.set(i, n_y, 1.0 - row);
    }
    for j in 0..n_y {
        let col: f64 = (0..n_x).map(|i| out.get(i, j)).sum();
        out.set(n_x, j, 1.0 - col);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{assignment_vectors, exact_metric};
    use crate::trajectory::Trajectory;

    fn line(label: &str, points: &[f64]) -> Trajectory {
        Trajectory::contiguous(label, 1, points.iter().map(|p| vec![*p]).collect()).unwrap()
    }

    #[test]
    fn variable_and_row_counts() {
        let params = MetricParams::new(5.0, 1.0, 1.0).unwrap();
        let x = TrajectorySet::new(1, vec![line("x", &[0.0])]).unwrap();
        let y = TrajectorySet::new(1, vec![line("y", &[1.0])]).unwrap();
        let lp = build_lp(&x, &y, &params, &WeightSchedule::uniform(1).unwrap()).unwrap();
        assert_eq!(lp.num_vars(), 4);
        assert_eq!(lp.equalities.len(), 3);
        assert!(lp.inequalities.is_empty());

        let x = TrajectorySet::new(3, vec![line("a", &[0.0; 3]), line("b", &[1.0; 3])]).unwrap();
        let y = TrajectorySet::new(3, vec![line("c", &[0.0; 3]), line("d", &[1.0; 3])]).unwrap();
        let lp = build_lp(&x, &y, &params, &WeightSchedule::uniform(3).unwrap()).unwrap();
        assert_eq!(lp.num_vars(), 3 * 9 + 2 * 4);
        assert_eq!(lp.inequalities.len(), 2 * 2 * 4);
    }

    #[test]
    fn binary_matrix_of_assignment_vector() {
        let pi = AssignmentVector::new(vec![2, 0], 3).unwrap();
        let w = SoftAssignment::from_assignment_vector(&pi, 3).unwrap();
        assert_eq!(w.get(0, 1), 1.0);
        assert_eq!(w.get(1, 3), 1.0);
        assert_eq!(w.get(2, 0), 1.0);
        assert_eq!(w.get(2, 2), 1.0);
        assert_eq!(w.get(2, 3), 0.0);
        assert!(w.is_feasible(0.0));
    }

    #[test]
    fn binary_objective_equals_exact_cost() {
        let params = MetricParams::new(4.0, 2.0, 1.5).unwrap();
        let x = TrajectorySet::new(3, vec![line("a", &[0.0, 0.0, 0.0]), line("b", &[1.0, 1.0, 1.0])]).unwrap();
        let y = TrajectorySet::new(3, vec![line("c", &[0.2, 0.9, 0.9]), line("d", &[1.1, 0.1, 0.0])]).unwrap();
        let weights = WeightSchedule::uniform(3).unwrap();
        let exact = exact_metric(&x, &y, &params, &weights).unwrap();
        let w: Vec<_> = exact
            .assignment_trace
            .as_ref()
            .unwrap()
            .iter()
            .map(|pi| SoftAssignment::from_assignment_vector(pi, 2).unwrap())
            .collect();
        let obj = lp_objective(&x, &y, &params, &weights, &w).unwrap();
        assert!((obj - exact.total.powf(2.0)).abs() < 1e-12);
    }

    #[test]
    fn relaxation_is_below_exact_and_closes() {
        let params = MetricParams::new(4.0, 1.0, 2.0).unwrap();
        let x = TrajectorySet::new(4, vec![line("a", &[0.0, 0.0, 0.0, 0.0]), line("b", &[1.0, 1.0, 1.0, 1.0])]).unwrap();
        let y = TrajectorySet::new(4, vec![line("c", &[0.1, 0.9, 0.1, 0.9]), line("d", &[0.9, 0.1, 0.9, 0.1])]).unwrap();
        let weights = WeightSchedule::uniform(4).unwrap();
        let exact = exact_metric(&x, &y, &params, &weights).unwrap();
        let lp = lp_metric(&x, &y, &params, &weights).unwrap();
        assert!(lp.total <= exact.total + 1e-9);
        let sum = lp.components().loc + lp.components().miss + lp.components().false_target + lp.components().switch;
        assert!((sum - lp.total).abs() < 1e-9);
        for w in lp.soft_trace.as_ref().unwrap() {
            assert!(w.is_feasible(1e-8));
        }
    }

    #[test]
    fn clustered_matches_unclustered() {
        let params = MetricParams::new(3.0, 1.0, 1.0).unwrap();
        let x = TrajectorySet::new(3, vec![line("a", &[0.0, 0.5, 0.0]), line("b", &[50.0, 50.0, 50.0])]).unwrap();
        let y = TrajectorySet::new(3, vec![line("c", &[0.4, 0.0, 0.4]), line("d", &[51.0, 49.0, 90.0])]).unwrap();
        let weights = WeightSchedule::uniform(3).unwrap();
        let a = lp_metric(&x, &y, &params, &weights).unwrap();
        let b = lp_metric_unclustered(&x, &y, &params, &weights).unwrap();
        assert!((a.total - b.total).abs() < 1e-9);
    }

    #[test]
    fn composition_keeps_feasibility() {
        let pi = AssignmentVector::new(vec![1, 0], 1).unwrap();
        let sigma = AssignmentVector::new(vec![0], 2).unwrap();
        let w_xz = SoftAssignment::from_assignment_vector(&pi, 1).unwrap();
        let w_zy = SoftAssignment::from_assignment_vector(&sigma, 2).unwrap();
        let w = compose_soft_assignments(&w_xz, &w_zy).unwrap();
        assert!(w.is_feasible(1e-15));
        assert_eq!(w.get(0, 2), 1.0);
        assert_eq!(w.get(2, 0), 1.0);
        assert!(compose_soft_assignments(&w_zy, &w_zy).is_err());
    }

    #[test]
    fn single_step_relaxation_is_integral() {
        // With one step the constraint matrix is a bipartite incidence
        // matrix, so the optimum equals the best assignment vector.
        let params = MetricParams::new(5.0, 1.0, 1.0).unwrap();
        let x = TrajectorySet::new(1, vec![line("a", &[0.0]), line("b", &[2.0])]).unwrap();
        let y = TrajectorySet::new(1, vec![line("c", &[1.5]), line("d", &[3.5]), line("e", &[-1.0])]).unwrap();
        let weights = WeightSchedule::uniform(1).unwrap();
        let d = cost_matrices(&x, &y, &params).unwrap();
        let best = assignment_vectors(2, 3)
            .iter()
            .map(|pi| {
                let w = SoftAssignment::from_assignment_vector(pi, 3).unwrap();
                soft_steps(&d, &[w], &params, &weights)[0].total()
            })
            .fold(f64::INFINITY, f64::min);
        let lp = lp_metric_unclustered(&x, &y, &params, &weights).unwrap();
        assert!((lp.total - best).abs() < 1e-9);
    }

    #[test]
    fn large_switch_penalty_is_certified() {
        let params = MetricParams::new(5.0, 1.0, 1e8).unwrap();
        let x = TrajectorySet::new(5, vec![line("a", &[20.37, 21.12, 19.58, 20.91, 21.39])]).unwrap();
        let y = TrajectorySet::new(
            5,
            vec![Trajectory::contiguous("b", 2, vec![vec![19.38], vec![18.46], vec![20.87], vec![21.65]]).unwrap()],
        )
        .unwrap();
        let weights = WeightSchedule::uniform(5).unwrap();
        let lp = lp_metric(&x, &y, &params, &weights).unwrap();
        let exact = exact_metric(&x, &y, &params, &weights).unwrap();
        assert!(lp.residuals.unwrap().duality_gap <= 1e-12);
        assert!((lp.total - exact.total).abs() < 1e-9);
    }
}
