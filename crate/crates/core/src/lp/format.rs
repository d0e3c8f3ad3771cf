use std::fmt::Write;

use super::{LinearRow, LpProblem};

const TERMS_PER_LINE: usize = 8;

fn var_name(problem: &LpProblem, v: usize) -> String {
    let block = (problem.n_x + 1) * (problem.n_y + 1);
    let assign_vars = problem.window * block;
    if v < assign_vars {
        let (k, rest) = (v / block, v % block);
        format!("w_{}_{}_{}", k + 1, rest / (problem.n_y + 1) + 1, rest % (problem.n_y + 1) + 1)
    } else {
        let per_step = problem.n_x * problem.n_y;
        let (k, rest) = ((v - assign_vars) / per_step, (v - assign_vars) % per_step);
        format!("e_{}_{}_{}", k + 1, rest / problem.n_y + 1, rest % problem.n_y + 1)
    }
}

fn write_terms(out: &mut String, problem: &LpProblem, terms: impl Iterator<Item = (usize, f64)>) {
    for (n, (v, a)) in terms.enumerate() {
        if n > 0 && n % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if a < 0.0 { '-' } else { '+' };
        let _ = write!(out, " {sign} {} {}", a.abs(), var_name(problem, v));
    }
}

fn write_row(out: &mut String, problem: &LpProblem, name: &str, row: &LinearRow, op: &str) {
    let _ = write!(out, " {name}:");
    write_terms(out, problem, row.terms.iter().copied());
    let _ = writeln!(out, " {op} {}", row.rhs);
}

/// CPLEX LP text of the problem. Indices in variable names are 1-based; the
/// last row and column index of `w` are the dummies.
pub fn to_lp_format(problem: &LpProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ n_x = {}, n_y = {}, T = {}",
        problem.n_x, problem.n_y, problem.window
    );
    out.push_str("Minimize\n obj:");
    write_terms(
        &mut out,
        problem,
        problem.objective.iter().copied().enumerate().filter(|(_, c)| *c != 0.0),
    );
    out.push_str("\nSubject To\n");
    for (r, row) in problem.equalities.iter().enumerate() {
        write_row(&mut out, problem, &format!("eq{}", r + 1), row, "=");
    }
    for (r, row) in problem.inequalities.iter().enumerate() {
        write_row(&mut out, problem, &format!("sw{}", r + 1), row, ">=");
    }
    out.push_str("End\n");
    out
}
