use serde::{Deserialize, Serialize};

use super::certificate::{check_theta, gegenbauer_sum, pair_count, pair_index};
use super::delsarte::delsarte_lp;
use super::theorem61::PairAverageCertificate;
use crate::error::{Error, Result};
use crate::poly::Poly1;
use crate::rng::SplitMix64;
use crate::spherical::PointConfiguration;
use crate::symlin::dot;

pub const AUDIT_TOL: f64 = 1e-12;

/// Every pair of distinct points has inner product at most `cos theta`.
pub fn code_audit(points: &PointConfiguration, theta: f64) -> bool {
    points.max_inner_product().is_none_or(|ip| ip <= theta.cos() + AUDIT_TOL)
}

/// Random unit vectors, each kept if it is at angle at least `theta` from
/// all kept ones; stops after `max_rejections` rejections in a row.
pub fn greedy_code(n: usize, theta: f64, max_rejections: usize, seed: u64) -> Result<PointConfiguration> {
    check_theta(theta)?;
    if n < 2 {
        return Err(Error::param("greedy codes need n >= 2"));
    }
    let c = theta.cos();
    let mut rng = SplitMix64::new(seed);
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut misses = 0;
    while misses < max_rejections {
        let p = rng.unit_vector(n);
        if points.iter().all(|q| dot(q, &p) <= c) {
            points.push(p);
            misses = 0;
        } else {
            misses += 1;
        }
    }
    PointConfiguration::new_sphere(n, points)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeAudit {
    pub n: u32,
    pub theta: f64,
    pub size: usize,
    pub valid_code: bool,
    /// Real bound `f(1)/f_0` of the Delsarte certificate.
    pub delsarte: f64,
    /// Integer bounds from `theorem61_bound` for `m = 0, 1, 2` (those with `m <= n - 2`).
    pub level_bounds: Vec<(u32, u64)>,
    /// Mean of `f(x) - f_0` over `C^{m+2}` for each level; nonnegative.
    pub level_sums: Vec<(u32, f64)>,
    pub sound: bool,
}

/// Checks a code against the bounds given by the certificate `g` at levels
/// `m = 0..=2`, and the nonnegativity of the certificate sums on the code.
pub fn audit_code(code: &PointConfiguration, theta: f64, g: &Poly1) -> Result<CodeAudit> {
    let n = code.n() as u32;
    let size = code.len();
    let valid_code = code_audit(code, theta);
    let mut level_bounds = Vec::new();
    let mut level_sums = Vec::new();
    let mut delsarte = f64::NAN;
    for m in 0..=2u32.min(n.saturating_sub(2)) {
        let cert = PairAverageCertificate::new(g, n, theta, m)?;
        let bound = cert.bound()?;
        if m == 0 {
            delsarte = bound.real_bound.unwrap_or(f64::NAN);
        }
        level_bounds.push((m, bound.n_max));
        level_sums.push((m, mean_over_tuples(code, &cert)?));
    }
    let sound = !valid_code
        || (level_bounds.iter().all(|&(_, b)| b as usize >= size)
            && delsarte >= size as f64 - 1e-9
            && level_sums.iter().all(|&(_, s)| s >= -1e-9));
    Ok(CodeAudit { n, theta, size, valid_code, delsarte, level_bounds, level_sums, sound })
}

/// Mean of `F = f - f_0` over all `(c_1, .., c_d)` in `C^d`, using that
/// `f` averages `g` over pairs.
fn mean_over_tuples(code: &PointConfiguration, cert: &PairAverageCertificate) -> Result<f64> {
    let d = cert.problem.d() as usize;
    let f = &cert.problem.f;
    let size = code.len();
    if size.pow(d as u32) <= 200_000 {
        let mut idx = vec![0usize; d];
        let mut total = 0.0;
        let mut count = 0u64;
        loop {
            let mut x = vec![0.0; pair_count(d)];
            for i in 0..d {
                for j in i + 1..d {
                    x[pair_index(i, j, d)] = dot(code.point(idx[i]), code.point(idx[j]));
                }
            }
            total += f.eval(&x) - cert.problem.f0;
            count += 1;
            let Some(pos) = (0..d).find(|&p| idx[p] + 1 < size) else {
                break;
            };
            idx[pos] += 1;
            idx[..pos].iter_mut().for_each(|v| *v = 0);
        }
        return Ok(total / count as f64);
    }
    // Each pair term averages to the pair mean of g.
    let mut pair_mean = 0.0;
    let g = f.terms.iter().filter(|t| t.pow[1..].iter().all(|&e| e == 0));
    let coeffs: Vec<(u32, f64)> = g.map(|t| (t.pow[0], t.c * pair_count(d) as f64)).collect();
    for a in code.points() {
        for b in code.points() {
            let t = dot(a, b);
            pair_mean += coeffs.iter().map(|&(e, c)| c * t.powi(e as i32)).sum::<f64>();
        }
    }
    Ok(pair_mean / (size * size) as f64 - cert.problem.f0)
}

/// Certificate for the audit: `t(t+1)` at right angles or wider, otherwise
/// the LP optimum of the given degree.
pub fn audit_certificate(n: u32, theta: f64, degree: u32) -> Result<Poly1> {
    if theta >= std::f64::consts::FRAC_PI_2 {
        return Ok(Poly1::new(vec![0.0, 1.0, 1.0]));
    }
    let cert = delsarte_lp(n, theta, degree, 2048)?;
    gegenbauer_sum(&cert.coefficients, n)
}
