//! Rectangular 2-D assignment with per-element unassignment costs.
//!
//! The problem is reduced to a square `(n + m) × (n + m)` assignment: row `i`
//! may take its own dummy column at cost `row_unassigned[i]`, column `j` may
//! be taken by its own dummy row at cost `col_unassigned[j]`, and dummy rows
//! pair with dummy columns for free. The square problem is solved with the
//! shortest augmenting path form of the Hungarian method.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matching {
    /// Column assigned to each row, `None` when the row is left unassigned.
    pub row_to_col: Vec<Option<usize>>,
    pub objective: f64,
}

impl Matching {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.row_to_col
            .iter()
            .enumerate()
            .filter_map(|(i, j)| j.map(|j| (i, j)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Choice {
    Col(usize),
    Unassigned,
}

struct Instance<'a> {
    cost: &'a [Vec<f64>],
    row_unassigned: &'a [f64],
    col_unassigned: &'a [f64],
    big: f64,
}

impl Instance<'_> {
    fn rows(&self) -> usize {
        self.row_unassigned.len()
    }

    fn cols(&self) -> usize {
        self.col_unassigned.len()
    }

    fn square(&self, forced: &[Option<Choice>]) -> Vec<f64> {
        let (n, m) = (self.rows(), self.cols());
        let size = n + m;
        let mut a = vec![0.0; size * size];
        for r in 0..size {
            for c in 0..size {
                a[r * size + c] = match (r < n, c < m) {
                    (true, true) => {
                        let v = self.cost[r][c];
                        if v.is_finite() {
                            v
                        } else {
                            self.big
                        }
                    }
                    (true, false) if c - m == r => self.row_unassigned[r],
                    (false, true) if r - n == c => self.col_unassigned[c],
                    (false, false) => 0.0,
                    _ => self.big,
                };
            }
        }
        for (i, choice) in forced.iter().enumerate() {
            match choice {
                Some(Choice::Col(j)) => {
                    for c in (0..size).filter(|&c| c != *j) {
                        a[i * size + c] = self.big;
                    }
                    for r in (0..size).filter(|&r| r != i) {
                        a[r * size + j] = self.big;
                    }
                }
                Some(Choice::Unassigned) => {
                    for c in (0..size).filter(|&c| c != m + i) {
                        a[i * size + c] = self.big;
                    }
                }
                None => {}
            }
        }
        a
    }

    fn matching(&self, row_of_col: &[usize]) -> Matching {
        let (n, m) = (self.rows(), self.cols());
        let mut row_to_col = vec![None; n];
        for (c, &r) in row_of_col.iter().enumerate() {
            if r < n && c < m {
                row_to_col[r] = Some(c);
            }
        }
        let mut objective = 0.0;
        let mut taken = vec![false; m];
        for (i, col) in row_to_col.iter().enumerate() {
            match col {
                Some(j) => {
                    objective += self.cost[i][*j];
                    taken[*j] = true;
                }
                None => objective += self.row_unassigned[i],
            }
        }
        objective += (0..m)
            .filter(|&j| !taken[j])
            .map(|j| self.col_unassigned[j])
            .sum::<f64>();
        Matching {
            row_to_col,
            objective,
        }
    }
}

/// Minimum-cost one-to-one matching between `n` rows and `m` columns where
/// any row or column may stay unassigned at its own fixed cost.
///
/// `cost` is `n × m`; an entry of `+∞` forbids that pair. Among optimal
/// matchings the lexicographically smallest `row_to_col` vector is returned,
/// ordering `Some(0) < Some(1) < … < None`.
pub fn solve_assignment(
    cost: &[Vec<f64>],
    row_unassigned: &[f64],
    col_unassigned: &[f64],
) -> Result<Matching> {
    let (n, m) = (row_unassigned.len(), col_unassigned.len());
    if cost.len() != n {
        return Err(Error::param(
            "cost",
            format!("{} rows but {n} row unassignment costs", cost.len()),
        ));
    }
    if let Some(row) = cost.iter().find(|row| row.len() != m) {
        return Err(Error::param(
            "cost",
            format!("row of length {} but {m} column unassignment costs", row.len()),
        ));
    }
    if cost.iter().flatten().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
        return Err(Error::param("cost", "entries must be finite or +inf"));
    }
    if row_unassigned.iter().chain(col_unassigned).any(|v| !v.is_finite()) {
        return Err(Error::param("unassigned_cost", "entries must be finite"));
    }

    let scale = 1.0
        + cost
            .iter()
            .flatten()
            .chain(row_unassigned)
            .chain(col_unassigned)
            .filter(|v| v.is_finite())
            .map(|v| v.abs())
            .sum::<f64>();
    let instance = Instance {
        cost,
        row_unassigned,
        col_unassigned,
        big: 2.0 * scale,
    };
    let size = n + m;
    if size == 0 {
        return Ok(Matching {
            row_to_col: Vec::new(),
            objective: 0.0,
        });
    }

    let base = instance.square(&vec![None; n]);
    let (row_of_col, u, v) = hungarian(&base, size);
    let mut best = instance.matching(&row_of_col);
    let optimum = best.objective;
    let objective_tol = 1e-9 * (1.0 + optimum.abs());
    let reduced_tol = 1e-9 * scale;

    // Every optimal matching only uses edges that are tight under the
    // optimal potentials, so only those are candidates for a smaller choice.
    let mut forced: Vec<Option<Choice>> = vec![None; n];
    for i in 0..n {
        let limit = best.row_to_col[i].unwrap_or(m);
        for j in 0..limit {
            if !cost[i][j].is_finite() || forced.contains(&Some(Choice::Col(j))) {
                continue;
            }
            if base[i * size + j] - u[i + 1] - v[j + 1] > reduced_tol {
                continue;
            }
            forced[i] = Some(Choice::Col(j));
            let (trial_cols, _, _) = hungarian(&instance.square(&forced), size);
            let trial = instance.matching(&trial_cols);
            if trial.row_to_col[i] == Some(j) && (trial.objective - optimum).abs() <= objective_tol {
                best = trial;
                break;
            }
            forced[i] = None;
        }
        forced[i] = Some(best.row_to_col[i].map_or(Choice::Unassigned, Choice::Col));
    }
    Ok(best)
}

/// Square assignment on the row-major `size × size` matrix `a`.
///
/// Returns the row assigned to each column plus the row and column potentials
/// (1-based, index 0 unused).
fn hungarian(a: &[f64], size: usize) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let mut u = vec![0.0; size + 1];
    let mut v = vec![0.0; size + 1];
    let mut p = vec![0usize; size + 1];
    let mut way = vec![0usize; size + 1];
    for i in 1..=size {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; size + 1];
        let mut used = vec![false; size + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=size {
                if used[j] {
                    continue;
                }
                let cur = a[(i0 - 1) * size + j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=size {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let row_of_col = (1..=size).map(|j| p[j] - 1).collect();
    (row_of_col, u, v)
}
