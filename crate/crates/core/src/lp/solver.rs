//! Solving [`LpProblem`]s.
//!
//! The primal is handed to `microlp` (a sparse revised simplex). Optimality
//! is then certified independently: the dual program is built explicitly,
//! solved as well, and the two objectives must agree. Primal feasibility is
//! re-checked on the returned point.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use super::{LinearRow, LpProblem, SoftAssignment};
use crate::error::{Error, Residuals, Result};

/// Maximum accepted primal infeasibility and relative duality gap.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct LpSolution {
    /// Objective at the returned point, before any root or normalisation.
    pub objective: f64,
    pub values: Vec<f64>,
    /// One soft assignment matrix per time step.
    pub assignments: Vec<SoftAssignment>,
    pub residuals: Residuals,
}

fn solver_error(reason: impl Into<String>, residuals: Residuals) -> Error {
    Error::Solver {
        reason: reason.into(),
        residuals,
    }
}

/// Neumaier-compensated sum.
fn accurate_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for t in terms {
        let next = sum + t;
        carry += if sum.abs() >= t.abs() { (sum - next) + t } else { (t - next) + sum };
        sum = next;
    }
    sum + carry
}

fn row_activity(row: &LinearRow, values: &[f64]) -> f64 {
    row.terms.iter().map(|&(v, a)| a * values[v]).sum()
}

fn primal_infeasibility(problem: &LpProblem, values: &[f64]) -> f64 {
    let eq = problem
        .equalities
        .iter()
        .map(|r| (row_activity(r, values) - r.rhs).abs());
    let ge = problem
        .inequalities
        .iter()
        .map(|r| (r.rhs - row_activity(r, values)).max(0.0));
    let sign = values.iter().map(|v| (-v).max(0.0));
    eq.chain(ge).chain(sign).fold(0.0, f64::max)
}

/// Maximises `b·y` subject to `Aᵀy ≤ c` (one entry of `columns` per kept
/// primal variable) and `y ≥ lower`.
fn solve_dual(b: &[f64], lower: &[f64], columns: &[(Vec<(usize, f64)>, f64)]) -> Result<Vec<f64>> {
    let mut dual = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = b
        .iter()
        .zip(lower)
        .map(|(&obj, &min)| dual.add_var(obj, (min, f64::INFINITY)))
        .collect();
    for (column, c) in columns {
        let terms: Vec<_> = column.iter().map(|&(r, a)| (vars[r], a)).collect();
        dual.add_constraint(&terms[..], ComparisonOp::Le, *c);
    }
    let outcome = dual
        .solve()
        .map_err(|e| solver_error(format!("dual solve failed: {e}"), Residuals::default()))?;
    let solution = outcome
        .into_solution()
        .map_err(|_| solver_error("dual solve interrupted", Residuals::default()))?;
    Ok(vars.iter().zip(lower).map(|(&v, &min)| solution.var_value(v).max(min)).collect())
}

/// Certified lower bound from the dual program
/// `max bₑ·y + b_g·z  s.t.  Aₑᵀy + A_gᵀz ≤ c, z ≥ 0`.
///
/// Variables pinned to zero by a single-term equality row are removed
/// together with that row. The bound is `b·y` at the returned dual point
/// less its dual infeasibility; every variable of an optimal primal point
/// lies in `[0, 1]`, so the subtraction keeps the bound valid.
fn dual_bound(problem: &LpProblem) -> Result<f64> {
    let mut pinned = vec![false; problem.num_vars()];
    for row in &problem.equalities {
        if let [(v, _)] = row.terms[..] {
            pinned[v] |= row.rhs == 0.0;
        }
    }
    let is_pin_row = |row: &LinearRow| matches!(row.terms[..], [(v, _)] if pinned[v] && row.rhs == 0.0);
    let rows: Vec<(&LinearRow, f64)> = problem
        .equalities
        .iter()
        .filter(|r| !is_pin_row(r))
        .map(|r| (r, f64::NEG_INFINITY))
        .chain(problem.inequalities.iter().map(|r| (r, 0.0)))
        .collect();

    let mut columns: Vec<(Vec<(usize, f64)>, f64)> = problem.objective.iter().map(|&c| (Vec::new(), c)).collect();
    for (r, (row, _)) in rows.iter().enumerate() {
        for &(v, a) in &row.terms {
            columns[v].0.push((r, a));
        }
    }
    let columns: Vec<_> = columns
        .into_iter()
        .zip(&pinned)
        .filter(|(_, &p)| !p)
        .map(|(c, _)| c)
        .collect();

    let b: Vec<f64> = rows.iter().map(|(r, _)| r.rhs).collect();
    let lower: Vec<f64> = rows.iter().map(|&(_, min)| min).collect();
    let y = solve_dual(&b, &lower, &columns)?;
    let value = accurate_sum(b.iter().zip(&y).map(|(b, y)| b * y));
    let infeasibility = accurate_sum(columns.iter().map(|(column, c)| {
        (accurate_sum(column.iter().map(|&(r, a)| a * y[r])) - c).max(0.0)
    }));
    Ok(value - infeasibility)
}

pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution> {
    let mut primal = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = problem
        .objective
        .iter()
        .map(|&c| primal.add_var(c, (0.0, f64::INFINITY)))
        .collect();
    for (rows, op) in [
        (&problem.equalities, ComparisonOp::Eq),
        (&problem.inequalities, ComparisonOp::Ge),
    ] {
        for row in rows {
            let terms: Vec<_> = row.terms.iter().map(|&(v, a)| (vars[v], a)).collect();
            primal.add_constraint(&terms[..], op, row.rhs);
        }
    }
    let outcome = primal
        .solve()
        .map_err(|e| solver_error(format!("primal solve failed: {e}"), Residuals::default()))?;
    let solution = outcome
        .into_solution()
        .map_err(|_| solver_error("primal solve interrupted", Residuals::default()))?;
    let values: Vec<f64> = vars.iter().map(|&v| solution.var_value(v)).collect();
    let objective = accurate_sum(problem.objective.iter().zip(&values).map(|(c, x)| c * x));

    let dual = dual_bound(problem)?;
    let residuals = Residuals {
        primal_infeasibility: primal_infeasibility(problem, &values),
        duality_gap: (objective - dual).abs() / objective.abs().max(1.0),
    };
    if residuals.primal_infeasibility > RESIDUAL_TOLERANCE || residuals.duality_gap > RESIDUAL_TOLERANCE {
        return Err(solver_error("residuals above tolerance", residuals));
    }

    let block = (problem.n_x + 1) * (problem.n_y + 1);
    let assignments = (0..problem.window)
        .map(|k| {
            SoftAssignment::from_values(
                problem.n_x,
                problem.n_y,
                values[k * block..(k + 1) * block].to_vec(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LpSolution {
        objective,
        values,
        assignments,
        residuals,
    })
}
