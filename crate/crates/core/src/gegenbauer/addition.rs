//! Addition theorem for Gegenbauer polynomials and its multivariate form.
//!
//! `G_k^{(n)}(cos a cos b + sin a sin b cos phi)
//!     = sum_s c_{nks} G_{k-s}^{(n+2s)}(cos a) G_{k-s}^{(n+2s)}(cos b) sin^s a sin^s b G_s^{(n-1)}(cos phi)`.
//!
//! The positive constants `c_{nks}` are recovered numerically: at a few
//! fixed `a = b` the left side is projected onto `G_s^{(n-1)}(cos phi)` under
//! the weight `sin^{n-3} phi` on `[0, pi]`, then divided by the known
//! `s`-term factor.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use super::multivariate::{check_levels, eval_mv_raw};
use super::recurrence::{coeffs_1d, eval_unchecked};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

pub const PROJECTION_NODES: usize = 64;
pub const PROJECTION_RESIDUAL_LIMIT: f64 = 1e-8;

/// Angles at which the projection is taken; spread so every `s`-factor is
/// nonzero at some of them.
const SAMPLE_ANGLES: [f64; 5] = [0.7, 1.1, 1.4, FRAC_PI_2, 2.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdditionCoefficients {
    pub n: u32,
    pub k: u32,
    /// `c[s]` for `s = 0..=k`.
    pub c: Vec<f64>,
    /// Largest disagreement between the projections and the fitted constants.
    pub residual: f64,
}

type AdditionCache = RwLock<HashMap<(u32, u32), Arc<AdditionCoefficients>>>;

fn cache() -> &'static AdditionCache {
    static CACHE: OnceLock<AdditionCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `c_{nks}`, `s = 0..=k`, for `n >= 3`. Cached.
pub fn addition_coefficients(n: u32, k: u32) -> Result<Arc<AdditionCoefficients>> {
    if n < 3 {
        return Err(Error::param(format!("addition theorem needs n >= 3, got {n}")));
    }
    if let Some(c) = cache().read().expect("cache lock").get(&(n, k)) {
        return Ok(Arc::clone(c));
    }
    let computed = Arc::new(recover(n, k)?);
    let mut guard = cache().write().expect("cache lock");
    Ok(Arc::clone(guard.entry((n, k)).or_insert(computed)))
}

fn recover(n: u32, k: u32) -> Result<AdditionCoefficients> {
    let quad = GaussLegendre::new(PROJECTION_NODES);
    let nodes: Vec<(f64, f64)> = quad.on_interval(0.0, PI).collect();
    let weight_pow = n as i32 - 3;

    let mut c = Vec::with_capacity(k as usize + 1);
    let mut residual = 0.0f64;
    for s in 0..=k {
        let norm: f64 = nodes
            .iter()
            .map(|&(phi, w)| {
                let g = eval_unchecked(n - 1, s, phi.cos());
                w * g * g * phi.sin().powi(weight_pow)
            })
            .sum();
        let mut projections = Vec::with_capacity(SAMPLE_ANGLES.len());
        for &a in &SAMPLE_ANGLES {
            let (ca, sa) = (a.cos(), a.sin());
            let inner: f64 = nodes
                .iter()
                .map(|&(phi, w)| {
                    let lhs = eval_unchecked(n, k, ca * ca + sa * sa * phi.cos());
                    w * lhs * eval_unchecked(n - 1, s, phi.cos()) * phi.sin().powi(weight_pow)
                })
                .sum();
            let g = eval_unchecked(n + 2 * s, k - s, ca);
            let factor = g * g * sa.powi(2 * s as i32);
            projections.push((inner / norm, factor));
        }
        // Least squares over the sample angles.
        let num: f64 = projections.iter().map(|(p, f)| p * f).sum();
        let den: f64 = projections.iter().map(|(_, f)| f * f).sum();
        let cs = num / den;
        for (p, f) in &projections {
            residual = residual.max((p - cs * f).abs());
        }
        c.push(cs);
    }
    if residual > PROJECTION_RESIDUAL_LIMIT {
        return Err(Error::ProjectionResidual { residual, limit: PROJECTION_RESIDUAL_LIMIT });
    }
    Ok(AdditionCoefficients { n, k, c, residual })
}

/// `C_{k-s}^{n,m}(u) = sqrt(c) w^{k-s} G_{k-s}^{(N+2s)}(u_m / w)` with
/// `w^2 = 1 - u_1^2 - .. - u_{m-1}^2`, evaluated without dividing by `w`.
///
/// The one-dimensional addition theorem is applied to `G_k^{(N)}` with
/// `N = n - m + 1`, the parameter of `G_k^{(n,m-1)}`, so the constants are
/// `c_{N k s}`. Only the first `m` entries of `u` are read.
pub fn addition_term(u: &[f64], n: u32, m: u32, k: u32, s: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::param("addition_term needs m >= 1"));
    }
    check_levels(n, m)?;
    if s > k {
        return Err(Error::param(format!("s = {s} exceeds k = {k}")));
    }
    if u.len() < m as usize {
        return Err(Error::DimensionMismatch { expected: m as usize, actual: u.len() });
    }
    let big_n = n - m + 1;
    let coeffs = addition_coefficients(big_n, k)?;
    let poly = coeffs_1d(big_n + 2 * s, k - s)?;
    let m = m as usize;
    let w2 = 1.0 - u[..m - 1].iter().map(|x| x * x).sum::<f64>();
    let x = u[m - 1];
    let deg = (k - s) as usize;
    let mut acc = 0.0;
    for (j, &a) in poly.coeffs.iter().enumerate() {
        if a == 0.0 || (deg - j) % 2 == 1 {
            continue;
        }
        acc += a * x.powi(j as i32) * w2.powi(((deg - j) / 2) as i32);
    }
    Ok(coeffs.c[s as usize].sqrt() * acc)
}

/// `|G_k^{(n,m-1)}(t,u',v') - sum_s C_{k-s}^{n,m}(u) C_{k-s}^{n,m}(v) G_s^{(n,m)}(t,u,v)|`
/// where `u'`, `v'` drop the last entry of `u`, `v` (length `m`).
pub fn addition_residual(t: f64, u: &[f64], v: &[f64], n: u32, m: u32, k: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::param("the addition theorem needs m >= 1"));
    }
    let mu = m as usize;
    if u.len() != mu || v.len() != mu {
        return Err(Error::DimensionMismatch { expected: mu, actual: u.len().min(v.len()) });
    }
    let lhs = eval_mv_raw(n, k, t, &u[..mu - 1], &v[..mu - 1])?;
    let mut rhs = 0.0;
    for s in 0..=k {
        rhs += addition_term(u, n, m, k, s)? * addition_term(v, n, m, k, s)? * eval_mv_raw(n, s, t, u, v)?;
    }
    Ok((lhs - rhs).abs())
}

/// Coefficients `f_s(u, v)`, `s = 0..=k`, with
/// `G_k^{(n,m)}(t,u,v) = sum_s f_s(u, v) G_s^{(n,l)}(t,u,v)` for `m <= l <= n-2`,
/// obtained by chaining the multivariate addition theorem level by level.
/// Each `f_s` is a sum of products `C(u) C(v)`.
pub fn telescope(u: &[f64], v: &[f64], n: u32, m: u32, l: u32, k: u32) -> Result<Vec<f64>> {
    if m > l {
        return Err(Error::param(format!("source level {m} exceeds target level {l}")));
    }
    check_levels(n, l)?;
    if u.len() < l as usize || v.len() < l as usize {
        return Err(Error::DimensionMismatch { expected: l as usize, actual: u.len().min(v.len()) });
    }
    let mut f = vec![0.0; k as usize + 1];
    f[k as usize] = 1.0;
    for level in (m + 1)..=l {
        let mut next = vec![0.0; k as usize + 1];
        for deg in 0..=k {
            let weight = f[deg as usize];
            if weight == 0.0 {
                continue;
            }
            for s in 0..=deg {
                let cu = addition_term(u, n, level, deg, s)?;
                let cv = addition_term(v, n, level, deg, s)?;
                next[s as usize] += weight * cu * cv;
            }
        }
        f = next;
    }
    Ok(f)
}
