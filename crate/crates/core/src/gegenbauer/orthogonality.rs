//! Numerical checks of the orthogonality of `G_k^{(n,m)}`: a Monte Carlo
//! estimate over pairs of sphere points and a deterministic quadrature over
//! the domain `D_m`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::multivariate::{check_levels, eval_with, homogenized};
use super::recurrence::coeffs_1d;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::rng::SplitMix64;
use crate::symlin::dot;

/// Weight `q(u, v)` on pairs of points of the unit ball in `R^m`.
pub type Weight<'a> = &'a (dyn Fn(&[f64], &[f64]) -> f64 + Sync);

pub const MIN_MC_SAMPLES: u64 = 1000;
const MC_CHUNKS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    /// `mean / stderr`; zero when both vanish.
    pub z: f64,
    pub samples: u64,
}

impl MonteCarloEstimate {
    pub fn within_sigmas(&self, sigmas: f64) -> bool {
        self.mean.abs() <= sigmas * self.stderr
    }
}

/// Mean of `G_k G_l f(x^(m), y^(m))` over independent uniform `x, y` on
/// `S^{n-1}`, i.e. the integral against the normalized product measure.
///
/// The samples are split into 64 fixed chunks, each with its own derived
/// stream, so the result does not depend on the thread count.
pub fn orthogonality_mc(
    n: u32,
    m: u32,
    k: u32,
    l: u32,
    f: Weight<'_>,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    check_levels(n, m)?;
    if samples < MIN_MC_SAMPLES {
        return Err(Error::param(format!("Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got {samples}")));
    }
    let gk = coeffs_1d(n - m, k)?;
    let gl = coeffs_1d(n - m, l)?;
    let (mu, nu) = (m as usize, n as usize);
    let per = samples / MC_CHUNKS;
    let extra = samples % MC_CHUNKS;
    let partial: Vec<(f64, f64)> = (0..MC_CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let count = per + u64::from(chunk < extra);
            let mut rng = SplitMix64::derive(seed, chunk);
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..count {
                let x = rng.unit_vector(nu);
                let y = rng.unit_vector(nu);
                let (u, v) = (&x[..mu], &y[..mu]);
                let s = dot(&x, &y) - dot(u, v);
                let p = (1.0 - dot(u, u)) * (1.0 - dot(v, v));
                let val = homogenized(&gk, s, p) * homogenized(&gl, s, p) * f(u, v);
                sum += val;
                sum_sq += val * val;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partial.iter().fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    let nf = samples as f64;
    let mean = sum / nf;
    let var = ((sum_sq / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
    let stderr = (var / nf).sqrt();
    let z = if stderr > 0.0 {
        mean / stderr
    } else if mean == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(mean)
    };
    Ok(MonteCarloEstimate { mean, stderr, z, samples })
}

/// `int_{-1}^{1} G_k^{(n)} G_l^{(n)} (1 - t^2)^{(n-3)/2} dt`, by Gauss-Legendre
/// in the angle `t = cos psi`.
pub fn weighted_inner_1d(n: u32, k: u32, l: u32) -> Result<f64> {
    let gk = coeffs_1d(n, k)?;
    let gl = coeffs_1d(n, l)?;
    let quad = GaussLegendre::new(angle_nodes(n, k, l));
    Ok(quad.integrate(0.0, PI, |psi| gk.eval(psi.cos()) * gl.eval(psi.cos()) * psi.sin().powi(n as i32 - 2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub norm_k: f64,
    pub norm_l: f64,
    /// `|value| / sqrt(|norm_k norm_l|)`.
    pub relative: f64,
}

fn angle_nodes(n: u32, k: u32, l: u32) -> usize {
    (k + l + n) as usize / 2 + 24
}

/// Quadrature of `int_{D_m} G_k G_l q rho dt du dv` for `m <= 2`.
///
/// With `t = s sqrt(P) + <u,v>`, `P = (1 - |u|^2)(1 - |v|^2)` and
/// `s = cos psi`, the integrand becomes
/// `G_k G_l q P^{(n-m-2)/2} sin^{n-m-2} psi`, which is smooth on the box.
/// The balls use `u = cos b` for `m = 1` and polar coordinates with radius
/// `sin g` for `m = 2`.
pub fn orthogonality_quad(n: u32, m: u32, k: u32, l: u32, q: Weight<'_>) -> Result<QuadratureResult> {
    if m > 2 {
        return Err(Error::param(format!("quadrature over D_m supports m <= 2, got {m}")));
    }
    check_levels(n, m)?;
    let value = domain_integral(n, m, k, l, q)?;
    let norm_k = domain_integral(n, m, k, k, q)?;
    let norm_l = domain_integral(n, m, l, l, q)?;
    let denom = (norm_k * norm_l).abs().sqrt();
    let relative = if denom > 0.0 { value.abs() / denom } else { value.abs() };
    Ok(QuadratureResult { value, norm_k, norm_l, relative })
}

fn ball_rule(m: u32, order: usize) -> Vec<(Vec<f64>, f64)> {
    match m {
        0 => vec![(Vec::new(), 1.0)],
        1 => GaussLegendre::new(order).on_interval(0.0, PI).map(|(b, w)| (vec![b.cos()], w * b.sin())).collect(),
        _ => {
            let radial: Vec<(f64, f64)> = GaussLegendre::new(order).on_interval(0.0, PI / 2.0).collect();
            let angular = 2 * order;
            let mut out = Vec::with_capacity(radial.len() * angular);
            for &(g, w) in &radial {
                let rho = g.sin();
                for a in 0..angular {
                    let phi = TAU * a as f64 / angular as f64;
                    out.push((vec![rho * phi.cos(), rho * phi.sin()], w * rho * g.cos() * TAU / angular as f64));
                }
            }
            out
        }
    }
}

fn domain_integral(n: u32, m: u32, k: u32, l: u32, q: Weight<'_>) -> Result<f64> {
    let big_n = n - m;
    let gk = coeffs_1d(big_n, k)?;
    let gl = coeffs_1d(big_n, l)?;
    let ball = ball_rule(m, ((k + l + n) / 2 + 8) as usize);
    let psi: Vec<(f64, f64)> = GaussLegendre::new(angle_nodes(n, k, l))
        .on_interval(0.0, PI)
        .map(|(x, w)| (x.cos(), w * x.sin().powi(big_n as i32 - 2)))
        .collect();
    let half = (big_n - 2) as f64 / 2.0;
    let total: f64 = ball
        .par_iter()
        .map(|(u, wu)| {
            let mut acc = 0.0;
            for (v, wv) in &ball {
                let p = ((1.0 - dot(u, u)) * (1.0 - dot(v, v))).max(0.0);
                let weight = q(u, v) * p.powf(half) * wu * wv;
                if weight == 0.0 {
                    continue;
                }
                let (root, uv) = (p.sqrt(), dot(u, v));
                let mut inner = 0.0;
                for &(s, ws) in &psi {
                    let t = s * root + uv;
                    inner += ws * eval_with(&gk, t, u, v) * eval_with(&gl, t, u, v);
                }
                acc += weight * inner;
            }
            acc
        })
        .sum();
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn one(_: &[f64], _: &[f64]) -> f64 {
        1.0
    }

    #[test]
    fn known_norm() {
        // int (5s^2 - 1)^2 / 16 (1 - s^2) ds = 2/21
        assert_abs_diff_eq!(weighted_inner_1d(5, 2, 2).unwrap(), 2.0 / 21.0, epsilon = 1e-13);
        let r = orthogonality_quad(5, 0, 2, 2, &one).unwrap();
        assert_abs_diff_eq!(r.value, 2.0 / 21.0, epsilon = 1e-13);
    }

    #[test]
    fn quad_orthogonal_m1() {
        let r = orthogonality_quad(5, 1, 1, 3, &one).unwrap();
        assert!(r.relative < 1e-8, "{r:?}");
        assert!(r.norm_k > 0.0 && r.norm_l > 0.0);
    }

    #[test]
    fn quad_orthogonal_m2_weighted() {
        let q = |u: &[f64], v: &[f64]| 1.0 + u[0] * v[0] + (u[1] * v[1]).powi(2);
        for (k, l) in [(0, 2), (1, 2), (2, 4)] {
            let r = orthogonality_quad(6, 2, k, l, &q).unwrap();
            assert!(r.relative < 1e-8, "k={k} l={l} {r:?}");
        }
    }

    #[test]
    fn quad_rejects_large_m() {
        assert!(orthogonality_quad(7, 3, 1, 2, &one).is_err());
    }

    #[test]
    fn mc_rejects_few_samples() {
        assert!(orthogonality_mc(4, 1, 1, 2, &one, 999, 1).is_err());
    }

    #[test]
    fn mc_orthogonal_and_positive() {
        let e = orthogonality_mc(4, 1, 1, 2, &one, 20_000, 5).unwrap();
        assert!(e.within_sigmas(4.0), "{e:?}");
        let d = orthogonality_mc(4, 1, 2, 2, &one, 20_000, 5).unwrap();
        assert!(d.mean > 0.0 && d.mean > 4.0 * d.stderr);
    }

    #[test]
    fn mc_m0_matches_1d() {
        let n = 5;
        let exact = weighted_inner_1d(n, 2, 2).unwrap() / weighted_inner_1d(n, 0, 0).unwrap();
        let e = orthogonality_mc(n, 0, 2, 2, &one, 200_000, 11).unwrap();
        assert!((e.mean - exact).abs() < 5.0 * e.stderr, "{e:?} vs {exact}");
    }

    #[test]
    fn mc_deterministic() {
        let a = orthogonality_mc(5, 2, 1, 3, &one, 5000, 3).unwrap();
        let b = orthogonality_mc(5, 2, 1, 3, &one, 5000, 3).unwrap();
        assert_eq!(a, b);
    }
}
