//! Expansion of a polynomial `F(t, u, v)` in the basis `G_k^{(n,m)}` and
//! positive semidefiniteness of the coefficient functions `f_k(u, v)`.

use serde::{Deserialize, Serialize};

use super::multivariate::{check_levels, monomial_exponents};
use super::recurrence::coeffs_1d;
use crate::error::{Error, Result};
use crate::poly::{TPoly, UvMonomial, UvPoly};
use crate::rng::SplitMix64;
use crate::symlin::{PsdReport, SymmetricMatrix, DEFAULT_PSD_TOL};

/// `<u, v>` as a `(u, v)` polynomial.
fn inner_uv(m: usize) -> UvPoly {
    (0..m).fold(UvPoly::zero(m), |acc, i| acc.add(&UvPoly::u(m, i).mul(&UvPoly::v(m, i))))
}

/// `(1 - |u|^2)(1 - |v|^2)`.
fn defect_uv(m: usize) -> UvPoly {
    let one = UvPoly::constant(m, 1.0);
    let uu = (0..m).fold(UvPoly::zero(m), |acc, i| acc.add(&UvPoly::u(m, i).pow(2)));
    let vv = (0..m).fold(UvPoly::zero(m), |acc, i| acc.add(&UvPoly::v(m, i).pow(2)));
    one.sub(&uu).mul(&one.sub(&vv))
}

/// `G_k^{(n,m)}` as a polynomial in `t` with `(u, v)`-polynomial coefficients.
pub fn gmv_tpoly(n: u32, m: u32, k: u32) -> Result<TPoly> {
    check_levels(n, m)?;
    let mu = m as usize;
    let c = coeffs_1d(n - m, k)?;
    let s = TPoly::new(mu, vec![inner_uv(mu).scale(-1.0), UvPoly::constant(mu, 1.0)])?;
    let p = defect_uv(mu);
    let mut out = TPoly::zero(mu);
    let mut s_pow = TPoly::new(mu, vec![UvPoly::constant(mu, 1.0)])?;
    for (j, &cj) in c.coeffs.iter().enumerate() {
        if j > 0 {
            s_pow = s_pow.mul(&s);
        }
        if cj == 0.0 {
            continue;
        }
        let e = (k as usize - j) / 2;
        out = out.add(&s_pow.mul_uv(&p.pow(e as u32).scale(cj)));
    }
    Ok(out)
}

/// Coefficient functions `f_0, .., f_d` with `F = sum_k f_k G_k^{(n,m)}`.
///
/// Peels from the top: the `t^k` coefficient of `G_k^{(n,m)}` is the
/// constant leading coefficient of `G_k^{(n-m)}`.
pub fn expand_in_t(f: &TPoly, n: u32, m: u32) -> Result<Vec<UvPoly>> {
    check_levels(n, m)?;
    if f.nvars() != m as usize {
        return Err(Error::DimensionMismatch { expected: m as usize, actual: f.nvars() });
    }
    let d = f.coeffs().len() - 1;
    let scale = f.coeffs().iter().map(UvPoly::max_abs_coeff).fold(1.0f64, f64::max);
    let mut rest = f.clone();
    let mut out = vec![UvPoly::zero(m as usize); d + 1];
    for k in (0..=d).rev() {
        let lead = rest.coeff(k);
        if lead.is_zero(0.0) {
            continue;
        }
        let basis = gmv_tpoly(n, m, k as u32)?;
        let fk = lead.scale(1.0 / coeffs_1d(n - m, k as u32)?.leading());
        rest = rest.sub(&basis.mul_uv(&fk));
        out[k] = fk.pruned(1e-15 * scale);
    }
    Ok(out)
}

/// The unique symmetric `H` with `f(u, v) = z_d(u)^T H z_d(v)`, where `d` is
/// the larger of the `u`- and `v`-degrees of `f`.
pub fn coefficient_matrix(f: &UvPoly) -> Result<(u32, SymmetricMatrix)> {
    let m = f.nvars();
    if m == 0 {
        let c = f.coefficient(&UvMonomial::one(0));
        return Ok((0, SymmetricMatrix::from_fn(1, |_, _| c)?));
    }
    let d = f.udegree().max(f.vdegree());
    let exps = monomial_exponents(m, d);
    let index: std::collections::HashMap<&[u32], usize> =
        exps.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    let dim = exps.len();
    let mut rows = vec![vec![0.0; dim]; dim];
    for (mono, c) in f.terms() {
        let a = index[mono.upow.as_slice()];
        let b = index[mono.vpow.as_slice()];
        rows[a][b] += c;
    }
    let scale = f.max_abs_coeff().max(1.0);
    for a in 0..dim {
        for b in 0..a {
            if (rows[a][b] - rows[b][a]).abs() > 1e-12 * scale {
                return Err(Error::param("coefficient function is not symmetric in u and v"));
            }
        }
    }
    Ok((d, SymmetricMatrix::from_fn(dim, |i, j| 0.5 * (rows[i][j] + rows[j][i]))?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionPsdReport {
    /// `exact` for the coefficient-matrix test, `sampled` for the point sampler.
    pub method: String,
    pub degree: u32,
    pub report: PsdReport,
}

/// Exact test: `f` is positive semidefinite iff its coefficient matrix is.
pub fn is_psd_function(f: &UvPoly, tol: f64) -> Result<FunctionPsdReport> {
    let (degree, h) = coefficient_matrix(f)?;
    Ok(FunctionPsdReport { method: "exact".into(), degree, report: h.is_psd(tol) })
}

pub const SAMPLER_POINTS: usize = 40;

/// Necessary condition: the matrix `(f(u_i, u_j))` on random points of the
/// unit ball is positive semidefinite.
pub fn sample_psd_function(f: &UvPoly, points: usize, seed: u64) -> Result<FunctionPsdReport> {
    let m = f.nvars();
    if points == 0 {
        return Err(Error::param("sampler needs at least one point"));
    }
    let mut rng = SplitMix64::new(seed);
    let pts: Vec<Vec<f64>> = (0..points).map(|_| rng.ball_point(m)).collect();
    let mat = SymmetricMatrix::from_fn(points, |i, j| 0.5 * (f.eval(&pts[i], &pts[j]) + f.eval(&pts[j], &pts[i])))?;
    Ok(FunctionPsdReport {
        method: "sampled".into(),
        degree: f.udegree().max(f.vdegree()),
        report: mat.is_psd(DEFAULT_PSD_TOL),
    })
}
