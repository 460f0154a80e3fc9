//! Dense two-phase simplex for `max c^T x` subject to `A x = b`, `x >= 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_SWITCH: usize = 50;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Multipliers `y` of the equality rows; `A^T y >= c` at optimality.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    /// Reduced costs `d_j = y^T A_j - c_j`, last entry is the objective.
    obj: Vec<f64>,
    basis: Vec<usize>,
    /// Columns allowed to enter.
    allowed: usize,
    pivots: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        self.rows[r].iter_mut().for_each(|v| *v /= p);
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                if f != 0.0 {
                    row.iter_mut().zip(&pivot_row).for_each(|(v, &pv)| *v -= f * pv);
                }
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            self.obj.iter_mut().zip(&pivot_row).for_each(|(v, &pv)| *v -= f * pv);
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Pivots until optimal; `Err` when unbounded.
    fn optimize(&mut self) -> Result<()> {
        let last = self.width();
        let mut degenerate = 0;
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(Error::Lp("not converging"));
            }
            let bland = degenerate >= DEGENERATE_SWITCH;
            let mut enter = None;
            let mut most = -PIVOT_TOL;
            for j in 0..self.allowed {
                if self.obj[j] < most {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    most = self.obj[j];
                }
            }
            let Some(c) = enter else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > PIVOT_TOL {
                    let ratio = row[last] / row[c];
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => ratio < lr - 1e-12 || (ratio <= lr + 1e-12 && self.basis[i] < self.basis[li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Err(Error::Lp("unbounded"));
            };
            degenerate = if ratio.abs() < 1e-14 { degenerate + 1 } else { 0 };
            self.pivot(r, c);
        }
    }
}

/// Solves `max c^T x` subject to `A x = b`, `x >= 0`, with one artificial
/// variable per row in phase one.
pub fn solve(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    if b.len() != m {
        return Err(Error::DimensionMismatch { expected: m, actual: b.len() });
    }
    let n = c.len();
    if let Some(row) = a.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, actual: row.len() });
    }
    let width = n + m;
    let mut sign = vec![1.0; m];
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        if b[i] < 0.0 {
            sign[i] = -1.0;
        }
        let mut row = vec![0.0; width + 1];
        for j in 0..n {
            row[j] = sign[i] * a[i][j];
        }
        row[n + i] = 1.0;
        row[width] = sign[i] * b[i];
        rows.push(row);
    }
    // Phase one: max -sum(artificials).
    let mut obj = vec![0.0; width + 1];
    for j in n..width {
        obj[j] = 1.0;
    }
    for row in &rows {
        obj.iter_mut().zip(row).for_each(|(o, v)| *o -= v);
    }
    let mut tab = Tableau { rows, obj, basis: (n..width).collect(), allowed: n, pivots: 0 };
    tab.optimize()?;
    let scale = 1.0 + b.iter().map(|v| v.abs()).sum::<f64>();
    if tab.obj[width] < -FEAS_TOL * scale {
        return Err(Error::Lp("infeasible"));
    }
    // Drive artificials out of the basis where possible.
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| tab.rows[r][j].abs() > PIVOT_TOL) {
                tab.pivot(r, j);
            }
        }
    }
    // Phase two.
    let mut obj = vec![0.0; width + 1];
    for j in 0..n {
        obj[j] = -c[j];
    }
    for (r, &bj) in tab.basis.iter().enumerate() {
        let f = obj[bj];
        if f != 0.0 {
            obj.iter_mut().zip(&tab.rows[r]).for_each(|(o, v)| *o -= f * v);
        }
    }
    tab.obj = obj;
    tab.optimize()?;

    let mut x = vec![0.0; n];
    for (r, &bj) in tab.basis.iter().enumerate() {
        if bj < n {
            x[bj] = tab.rows[r][width];
        }
    }
    let duals = (0..m).map(|i| sign[i] * tab.obj[n + i]).collect();
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpSolution { x, objective, duals, pivots: tab.pivots })
}
