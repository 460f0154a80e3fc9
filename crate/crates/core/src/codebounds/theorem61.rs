use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::certificate::{pair_count, CodeProblem, PairPolynomial};
use super::delsarte::delsarte_bound;
use super::patterns::{enumerate_patterns, q_omega_f64, PartitionPattern};
use crate::error::{Error, Result};
use crate::poly::Poly1;

/// Upward scans stop here.
pub const MAX_SCAN: u64 = 100_000_000;

/// Relative slack for rounding when testing the inequality at an integer.
pub const RESIDUAL_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem61Bound {
    pub m: u32,
    /// Largest `N` such that every size `1..=N` satisfies the inequality.
    pub n_max: u64,
    /// Real crossing point of the inequality just above `n_max`.
    pub real_bound: Option<f64>,
    /// `sum_omega B_omega q_omega(N) - f_0 N^{m+1}` at `n_max`.
    pub residual_at_n: f64,
    /// The same at `n_max + 1`; negative beyond rounding.
    pub residual_at_next: f64,
}

/// `sum_omega B_omega q_omega(N) - f_0 N^{m+1}`, with `B_(d) = f_diag`.
pub fn theorem61_residual(m: u32, f0: f64, f_diag: f64, b: &BTreeMap<PartitionPattern, f64>, n: f64) -> f64 {
    let d = m + 2;
    let full = PartitionPattern::full(d);
    let sum: f64 = b.iter().filter(|(w, _)| **w != full).map(|(w, &v)| v * q_omega_f64(w, n)).sum();
    f_diag + sum - f0 * n.powi(m as i32 + 1)
}

fn residual_scale(m: u32, f0: f64, f_diag: f64, b: &BTreeMap<PartitionPattern, f64>, n: f64) -> f64 {
    let full = PartitionPattern::full(m + 2);
    let sum: f64 = b.iter().filter(|(w, _)| **w != full).map(|(w, &v)| (v * q_omega_f64(w, n)).abs()).sum();
    f_diag.abs() + sum + f0 * n.powi(m as i32 + 1)
}

/// Largest code size allowed by `f_0 N^{m+1} <= sum_omega B_omega q_omega(N)`.
///
/// `b_values` must hold an upper bound for every pattern of `W_{m+2}` other
/// than `(m+2)`, whose value is `f_diag`, and `(1, .., 1)`, which defaults
/// to 0 when absent. `N` is scanned upward from 1; an integer passes when
/// the residual is within rounding (relative `1e-9`) of nonnegative.
pub fn theorem61_bound(
    m: u32,
    f0: f64,
    f_diag: f64,
    b_values: &BTreeMap<PartitionPattern, f64>,
) -> Result<Theorem61Bound> {
    if m > 2 {
        return Err(Error::param(format!("closed-form bounds cover m <= 2, got {m}")));
    }
    if f0.is_nan() || f0 <= 0.0 {
        return Err(Error::param(format!("f0 = {f0} must be positive")));
    }
    let d = m + 2;
    let full = PartitionPattern::full(d);
    let distinct = PartitionPattern::distinct(d);
    let mut b = BTreeMap::new();
    for w in enumerate_patterns(d)? {
        let value = if w == full {
            f_diag
        } else if let Some(&v) = b_values.get(&w) {
            v
        } else if w == distinct {
            0.0
        } else {
            return Err(Error::param(format!("missing B value for pattern {w}")));
        };
        if !value.is_finite() {
            return Err(Error::param(format!("B value for {w} is not finite")));
        }
        b.insert(w, value);
    }
    if let Some(extra) = b_values.keys().find(|w| w.d() != d) {
        return Err(Error::param(format!("pattern {extra} does not belong to W_{d}")));
    }
    let lead = b[&distinct] - f0;
    if lead >= 0.0 {
        return Err(Error::param("B for the all-distinct pattern must be below f0 for a finite bound"));
    }
    let res = |n: u64| theorem61_residual(m, f0, f_diag, &b, n as f64);
    let holds = |n: u64| res(n) >= -RESIDUAL_REL_TOL * residual_scale(m, f0, f_diag, &b, n as f64);
    let mut n = 0u64;
    while holds(n + 1) {
        n += 1;
        if n >= MAX_SCAN {
            return Err(Error::param(format!("bound exceeds the scan limit {MAX_SCAN}")));
        }
    }
    let real_bound = if m == 0 {
        let b11 = b[&distinct];
        Some((f_diag - b11) / (f0 - b11))
    } else if n >= 1 {
        let (mut lo, mut hi) = (n as f64, n as f64 + 1.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if theorem61_residual(m, f0, f_diag, &b, mid) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    } else {
        None
    };
    Ok(Theorem61Bound {
        m,
        n_max: n,
        real_bound,
        residual_at_n: if n == 0 { f64::NAN } else { res(n) },
        residual_at_next: res(n + 1),
    })
}

/// `f(x) = mean over pairs of g(x_ij)` built from a Delsarte certificate `g`.
/// With `g <= 0` on `[-1, cos theta]`, a pattern with `e` equal pairs out of
/// `P` satisfies `B_omega <= e g(1) / P`, and the sum of `F = f - g_0` over
/// `C^{m+2}` is `N^m` times the pair sum of `g - g_0`, which is nonnegative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairAverageCertificate {
    pub problem: CodeProblem,
    pub b_values: BTreeMap<PartitionPattern, f64>,
    pub verification: Vec<String>,
}

impl PairAverageCertificate {
    pub fn new(g: &Poly1, n: u32, theta: f64, m: u32) -> Result<Self> {
        let base = delsarte_bound(g, n, theta)?;
        let d = m + 2;
        let pairs = pair_count(d as usize) as f64;
        let g1 = g.eval(1.0);
        let mut b_values = BTreeMap::new();
        for w in enumerate_patterns(d)? {
            b_values.insert(w.clone(), f64::from(w.equal_pairs()) * g1 / pairs);
        }
        let f = PairPolynomial::pair_average(g, d as usize);
        let problem = CodeProblem::new(n, theta, m, f, base.coefficients[0])?;
        let mut verification = base.verification;
        verification.push(format!("B_omega <= (equal pairs) g(1) / {pairs} for every omega in W_{d}"));
        Ok(Self { problem, b_values, verification })
    }

    pub fn bound(&self) -> Result<Theorem61Bound> {
        theorem61_bound(self.problem.m, self.problem.f0, self.problem.f.diagonal_value(), &self.b_values)
    }
}
