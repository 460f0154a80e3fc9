use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::certificate::{check_theta, gegenbauer_expand, gegenbauer_sum, max_on_interval, verify_nonpositive};
use super::patterns::PartitionPattern;
use super::simplex;
use crate::error::{Error, Result};
use crate::gegenbauer::eval_1d_all;
use crate::poly::Poly1;

/// Gegenbauer coefficients down to this value count as nonnegative.
pub const COEFF_TOL: f64 = -1e-12;
pub const MAX_LP_DEGREE: u32 = 30;
pub const MIN_LP_GRID: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub n: u32,
    pub theta: f64,
    pub bound: f64,
    /// Value used for each `B_omega`, keyed by the pattern, e.g. `(2,1)`.
    pub per_omega: BTreeMap<String, f64>,
    /// Checks performed, one line each.
    pub verification: Vec<String>,
    /// Gegenbauer coefficients `f_0, f_1, ..` of the certificate.
    pub coefficients: Vec<f64>,
}

impl BoundCertificate {
    /// `k,f_k` rows.
    pub fn coefficients_csv(&self) -> String {
        let mut out = String::from("k,f_k\n");
        for (k, c) in self.coefficients.iter().enumerate() {
            out.push_str(&format!("{k},{c:e}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// `N <= f(1) / f_0` for a certificate with nonnegative Gegenbauer
/// coefficients, `f_0 > 0`, and `f <= 0` on `[-1, cos theta]`.
pub fn delsarte_bound(f: &Poly1, n: u32, theta: f64) -> Result<BoundCertificate> {
    check_theta(theta)?;
    let coefficients = gegenbauer_expand(f, n)?;
    let mut verification = Vec::new();
    if let Some((k, &c)) = coefficients.iter().enumerate().find(|(_, &c)| c < COEFF_TOL) {
        return Err(Error::CertificateRejected(format!("Gegenbauer coefficient f_{k} = {c:e} is negative")));
    }
    verification.push(format!("Gegenbauer coefficients f_1..f_{} >= {COEFF_TOL:e}", coefficients.len() - 1));
    let f0 = coefficients[0];
    if f0 <= 0.0 {
        return Err(Error::CertificateRejected(format!("constant term f_0 = {f0:e} is not positive")));
    }
    verification.push(format!("f_0 = {f0:e} > 0"));
    if !verify_nonpositive(f, theta)? {
        let (at, max) = max_on_interval(f, -1.0, theta.cos());
        return Err(Error::CertificateRejected(format!("f is positive on [-1, cos theta]: f({at}) = {max:e}")));
    }
    verification.push("f <= 1e-12 on [-1, cos theta] (grid 10^4 + critical points)".into());
    let diag = f.eval(1.0);
    let mut per_omega = BTreeMap::new();
    per_omega.insert(PartitionPattern::full(2).to_string(), diag);
    per_omega.insert(PartitionPattern::distinct(2).to_string(), 0.0);
    Ok(BoundCertificate { n, theta, bound: diag / f0, per_omega, verification, coefficients })
}

/// Optimizes the Delsarte certificate over polynomials of the given degree:
/// `min sum_k f_k` with `f_0 = 1`, `f_k >= 0` and `f(t_j) <= 0` on a grid of
/// `[-1, cos theta]`. Solved through the dual LP, whose row multipliers are
/// the `f_k`. The result is checked on the whole interval; if it is positive
/// somewhere by `eps`, `f - eps` is used instead.
pub fn delsarte_lp(n: u32, theta: f64, degree: u32, grid: usize) -> Result<BoundCertificate> {
    check_theta(theta)?;
    if !(1..=MAX_LP_DEGREE).contains(&degree) {
        return Err(Error::param(format!("LP degree must lie in 1..={MAX_LP_DEGREE}")));
    }
    if grid < MIN_LP_GRID {
        return Err(Error::param(format!("LP grid needs at least {MIN_LP_GRID} points")));
    }
    let c = theta.cos();
    let deg = degree as usize;
    let nodes: Vec<f64> =
        (0..grid).map(|j| if j == grid - 1 { c } else { -1.0 + (c + 1.0) * j as f64 / (grid - 1) as f64 }).collect();
    let values = nodes.iter().map(|&t| eval_1d_all(n, degree, t)).collect::<Result<Vec<_>>>()?;
    // Row k: sum_j -G_k(t_j) y_j + s_k = 1.
    let a: Vec<Vec<f64>> = (1..=deg)
        .map(|k| {
            let mut row: Vec<f64> = values.iter().map(|g| -g[k]).collect();
            row.extend((1..=deg).map(|i| f64::from(i == k)));
            row
        })
        .collect();
    let b = vec![1.0; deg];
    let mut cost = vec![1.0; grid];
    cost.extend(vec![0.0; deg]);
    let sol = simplex::solve(&a, &b, &cost).map_err(|e| match e {
        Error::Lp("unbounded") => Error::Lp("infeasible: no certificate of this degree"),
        other => other,
    })?;
    let mut coeffs = vec![1.0];
    let mut clamped = 0usize;
    for &y in &sol.duals {
        if y < 0.0 {
            clamped += 1;
        }
        coeffs.push(y.max(0.0));
    }
    let mut f = gegenbauer_sum(&coeffs, n)?;
    let (_, overshoot) = max_on_interval(&f, -1.0, c);
    let mut notes = vec![format!(
        "dual simplex: {} pivots, LP value {:.12}, {clamped} negative multipliers clamped",
        sol.pivots,
        1.0 + sol.objective
    )];
    if overshoot > 0.0 {
        if overshoot >= 1.0 {
            return Err(Error::CertificateRejected(format!("grid leakage {overshoot:e} is too large to shrink")));
        }
        f.coeffs[0] -= overshoot;
        notes.push(format!("grid leakage {overshoot:e} removed from the constant term"));
    }
    let mut cert = delsarte_bound(&f, n, theta)?;
    notes.append(&mut cert.verification);
    cert.verification = notes;
    Ok(cert)
}
