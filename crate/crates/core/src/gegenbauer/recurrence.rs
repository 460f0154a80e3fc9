use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly1;

/// `G_k^{(n)}` in monomial form; `coeffs[j]` multiplies `t^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GegenbauerPolynomial {
    pub n: u32,
    pub k: u32,
    pub coeffs: Vec<f64>,
}

impl GegenbauerPolynomial {
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[self.k as usize]
    }

    pub fn to_poly(&self) -> Poly1 {
        Poly1::new(self.coeffs.clone())
    }
}

pub(crate) fn check_dimension(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::param(format!("dimension parameter n = {n} must be at least 2")));
    }
    Ok(())
}

/// `G_k^{(n)}(t)` by the three-term recurrence
/// `G_k = ((2k + n - 4) t G_{k-1} - (k - 1) G_{k-2}) / (k + n - 3)`,
/// normalized so that `G_k(1) = 1`.
pub fn eval_1d(n: u32, k: u32, t: f64) -> Result<f64> {
    check_dimension(n)?;
    Ok(eval_unchecked(n, k, t))
}

pub(crate) fn eval_unchecked(n: u32, k: u32, t: f64) -> f64 {
    let nf = n as f64;
    let mut g0 = 1.0;
    if k == 0 {
        return g0;
    }
    let mut g1 = t;
    for j in 2..=k {
        let jf = j as f64;
        let g2 = ((2.0 * jf + nf - 4.0) * t * g1 - (jf - 1.0) * g0) / (jf + nf - 3.0);
        g0 = g1;
        g1 = g2;
    }
    g1
}

/// All of `G_0^{(n)}(t), ..., G_kmax^{(n)}(t)`.
pub fn eval_1d_all(n: u32, kmax: u32, t: f64) -> Result<Vec<f64>> {
    check_dimension(n)?;
    let nf = n as f64;
    let mut out = Vec::with_capacity(kmax as usize + 1);
    out.push(1.0);
    if kmax >= 1 {
        out.push(t);
    }
    for j in 2..=kmax as usize {
        let jf = j as f64;
        let g = ((2.0 * jf + nf - 4.0) * t * out[j - 1] - (jf - 1.0) * out[j - 2]) / (jf + nf - 3.0);
        out.push(g);
    }
    Ok(out)
}

type CoeffCache = RwLock<HashMap<(u32, u32), Arc<GegenbauerPolynomial>>>;

fn coeff_cache() -> &'static CoeffCache {
    static CACHE: OnceLock<CoeffCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Monomial coefficients of `G_k^{(n)}`, running the recurrence on
/// coefficient vectors. Cached; safe to call from many threads.
pub fn coeffs_1d(n: u32, k: u32) -> Result<Arc<GegenbauerPolynomial>> {
    check_dimension(n)?;
    if let Some(p) = coeff_cache().read().expect("cache lock").get(&(n, k)) {
        return Ok(Arc::clone(p));
    }
    let poly = Arc::new(build_coeffs(n, k));
    let mut cache = coeff_cache().write().expect("cache lock");
    Ok(Arc::clone(cache.entry((n, k)).or_insert(poly)))
}

fn build_coeffs(n: u32, k: u32) -> GegenbauerPolynomial {
    let nf = n as f64;
    let k = k as usize;
    let mut prev = vec![1.0];
    if k == 0 {
        return GegenbauerPolynomial { n, k: 0, coeffs: prev };
    }
    let mut cur = vec![0.0, 1.0];
    for j in 2..=k {
        let jf = j as f64;
        let a = (2.0 * jf + nf - 4.0) / (jf + nf - 3.0);
        let b = (jf - 1.0) / (jf + nf - 3.0);
        let mut next = vec![0.0; j + 1];
        for (p, &c) in cur.iter().enumerate() {
            next[p + 1] += a * c;
        }
        for (p, &c) in prev.iter().enumerate() {
            next[p] -= b * c;
        }
        prev = cur;
        cur = next;
    }
    // Exact zeros in the opposite-parity slots.
    for (p, c) in cur.iter_mut().enumerate() {
        if (p + k) % 2 == 1 {
            *c = 0.0;
        }
    }
    GegenbauerPolynomial { n, k: k as u32, coeffs: cur }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn low_degrees() {
        for n in 2..8 {
            for &t in &[-0.7, 0.0, 0.3, 1.0] {
                assert_eq!(eval_1d(n, 0, t).unwrap(), 1.0);
                assert_eq!(eval_1d(n, 1, t).unwrap(), t);
                let nf = n as f64;
                let g2 = (nf * t * t - 1.0) / (nf - 1.0);
                assert_abs_diff_eq!(eval_1d(n, 2, t).unwrap(), g2, epsilon = 1e-15);
                let g3 = ((nf + 2.0) * t.powi(3) - 3.0 * t) / (nf - 1.0);
                assert_abs_diff_eq!(eval_1d(n, 3, t).unwrap(), g3, epsilon = 1e-14);
            }
        }
        assert_abs_diff_eq!(eval_1d(4, 2, 0.5).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn chebyshev_at_n2() {
        assert_abs_diff_eq!(eval_1d(2, 3, 0.5).unwrap(), -1.0, epsilon = 1e-14);
        for k in 0..10 {
            let theta = 0.37f64;
            assert_abs_diff_eq!(eval_1d(2, k, theta.cos()).unwrap(), (k as f64 * theta).cos(), epsilon = 1e-13);
        }
    }

    #[test]
    fn rejects_small_n() {
        assert!(eval_1d(1, 2, 0.0).is_err());
        assert!(coeffs_1d(0, 2).is_err());
    }

    #[test]
    fn coefficient_examples() {
        for n in 2..7u32 {
            let nf = n as f64;
            let c = coeffs_1d(n, 2).unwrap();
            assert_abs_diff_eq!(c.coeffs[0], -1.0 / (nf - 1.0), epsilon = 1e-15);
            assert_eq!(c.coeffs[1], 0.0);
            assert_abs_diff_eq!(c.coeffs[2], nf / (nf - 1.0), epsilon = 1e-15);
        }
        let t3 = coeffs_1d(2, 3).unwrap();
        for (a, b) in t3.coeffs.iter().zip([0.0, -3.0, 0.0, 4.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn parity_pattern() {
        for n in 2..9 {
            for k in 0..12 {
                let c = coeffs_1d(n, k).unwrap();
                assert_eq!(c.coeffs.len(), k as usize + 1);
                for (j, &x) in c.coeffs.iter().enumerate() {
                    if (j + k as usize) % 2 == 1 {
                        assert_eq!(x, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn all_matches_single() {
        let all = eval_1d_all(6, 9, 0.41).unwrap();
        for (k, v) in all.iter().enumerate() {
            assert_abs_diff_eq!(*v, eval_1d(6, k as u32, 0.41).unwrap(), epsilon = 1e-15);
        }
    }
}
