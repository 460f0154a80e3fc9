use serde::{Deserialize, Serialize};

use super::recurrence::{check_dimension, coeffs_1d, GegenbauerPolynomial};
use crate::error::{Error, Result};
use crate::symlin::{dot, norm_sq, DenseMatrix, SymmetricMatrix};

/// Argument `(t, u, v)` of `G_k^{(n,m)}` with `u, v in R^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultivariateInput {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub n: u32,
    pub m: u32,
}

impl MultivariateInput {
    pub fn new(n: u32, t: f64, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: u.len(), actual: v.len() });
        }
        let m = u.len() as u32;
        let input = Self { t, u, v, n, m };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<()> {
        check_levels(self.n, self.m)?;
        if self.u.len() != self.m as usize || self.v.len() != self.m as usize {
            return Err(Error::DimensionMismatch { expected: self.m as usize, actual: self.u.len() });
        }
        Ok(())
    }

    /// Membership in `D_m`: `|u|, |v| <= 1` and
    /// `(t - <u,v>)^2 <= (1 - |u|^2)(1 - |v|^2)`.
    pub fn in_domain(&self, tol: f64) -> bool {
        let pu = 1.0 - norm_sq(&self.u);
        let pv = 1.0 - norm_sq(&self.v);
        let s = self.t - dot(&self.u, &self.v);
        pu >= -tol && pv >= -tol && s * s <= pu * pv + tol
    }
}

pub(crate) fn check_levels(n: u32, m: u32) -> Result<()> {
    check_dimension(n)?;
    if m + 2 > n {
        return Err(Error::param(format!("level m = {m} must satisfy m <= n - 2 (n = {n})")));
    }
    Ok(())
}

/// `sum_j c_j s^j p^((k - j) / 2)` over the parity-matching `j`. This is
/// `G_k^{(n,m)}` with `s = t - <u,v>` and `p = (1 - |u|^2)(1 - |v|^2)`,
/// free of square roots and divisions.
pub(crate) fn homogenized(poly: &GegenbauerPolynomial, s: f64, p: f64) -> f64 {
    let k = poly.k as usize;
    let parity = k % 2;
    let half = k / 2;
    let s2 = s * s;
    let mut s_pow = if parity == 1 { s } else { 1.0 };
    let mut p_pows = Vec::with_capacity(half + 1);
    let mut pp = 1.0;
    for _ in 0..=half {
        p_pows.push(pp);
        pp *= p;
    }
    let mut acc = 0.0;
    for i in 0..=half {
        acc += poly.coeffs[parity + 2 * i] * s_pow * p_pows[half - i];
        s_pow *= s2;
    }
    acc
}

/// `G_k^{(n,m)}(t, u, v)`; `m` is taken from the lengths of `u` and `v`.
pub fn eval_mv(input: &MultivariateInput, k: u32) -> Result<f64> {
    input.validate()?;
    let poly = coeffs_1d(input.n - input.m, k)?;
    Ok(eval_with(&poly, input.t, &input.u, &input.v))
}

/// Evaluate with the `G_k^{(n-m)}` coefficients already in hand.
pub(crate) fn eval_with(poly: &GegenbauerPolynomial, t: f64, u: &[f64], v: &[f64]) -> f64 {
    let s = t - dot(u, v);
    let p = (1.0 - norm_sq(u)) * (1.0 - norm_sq(v));
    homogenized(poly, s, p)
}

/// Convenience wrapper over slices.
pub fn eval_mv_raw(n: u32, k: u32, t: f64, u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), actual: v.len() });
    }
    let m = u.len() as u32;
    check_levels(n, m)?;
    let poly = coeffs_1d(n - m, k)?;
    Ok(eval_with(&poly, t, u, v))
}

/// `Q_m(t, u, v)`, the `(m+2) x (m+2)` Gram matrix of `e_1..e_m, x, y`.
pub fn q_matrix(t: f64, u: &[f64], v: &[f64]) -> Result<SymmetricMatrix> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), actual: v.len() });
    }
    let m = u.len();
    SymmetricMatrix::from_fn(m + 2, |i, j| match (i, j) {
        (i, j) if i < m && j < m => f64::from(i == j),
        (i, j) if i < m && j == m => u[i],
        (i, _) if i < m => v[i],
        (i, j) if i == j => 1.0,
        _ => t,
    })
}

/// Exponent vectors of all monomials in `m` variables of total degree
/// `<= d`, graded, and lexicographically descending within each degree:
/// `1, x1, .., xm, x1^2, x1 x2, .., xm^2, ..`.
pub fn monomial_exponents(m: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for g in 0..=d {
        let mut cur = vec![0u32; m];
        push_degree(&mut out, &mut cur, 0, g);
    }
    out
}

fn push_degree(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, remaining: u32) {
    let m = cur.len();
    if m == 0 {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == m - 1 {
        cur[pos] = remaining;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        push_degree(out, cur, pos + 1, remaining - e);
    }
    cur[pos] = 0;
}

/// `z_d^m(x)`: values of the monomials of `monomial_exponents(m, d)`.
pub fn monomial_vector(x: &[f64], d: u32) -> Vec<f64> {
    monomial_exponents(x.len(), d)
        .iter()
        .map(|e| e.iter().zip(x).map(|(&p, &xi)| xi.powi(p as i32)).product())
        .collect()
}

/// `Z_d^m(u, v) = z(u)^T z(v)`, entry `(i, j) = z_i(u) z_j(v)`.
pub fn z_outer(u: &[f64], v: &[f64], d: u32) -> Result<DenseMatrix> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), actual: v.len() });
    }
    let zu = monomial_vector(u, d);
    let zv = monomial_vector(v, d);
    Ok(DenseMatrix::from_fn(zu.len(), zv.len(), |i, j| zu[i] * zv[j]))
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
