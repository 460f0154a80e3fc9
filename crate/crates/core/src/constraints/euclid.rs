use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gegenbauer::{check_levels, coeffs_1d, homogenized};
use crate::spherical::PointConfiguration;
use crate::symlin::{dot, norm_sq, SymmetricMatrix};

/// `(H_k^{(n,m)}(<p_i,p_j>, |p_i|^2, |p_j|^2, p_i^(m), p_j^(m)))` with
/// `H_k^{(n,m)} = sum_j c_j (t - <u,v>)^j ((x - |u|^2)(y - |v|^2))^{(k-j)/2}`.
/// A zero vector contributes the limit value: 0 for `k >= 1`, 1 for `k = 0`.
pub fn euclid_kernel(points: &PointConfiguration, m: u32, k: u32) -> Result<SymmetricMatrix> {
    if points.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    let n = points.n() as u32;
    check_levels(n, m)?;
    let poly = coeffs_1d(n - m, k)?;
    let mu = m as usize;
    let pts = points.points();
    let r = pts.len();
    let rows: Vec<Vec<f64>> = (0..r)
        .into_par_iter()
        .map(|i| {
            (i..r)
                .map(|j| {
                    let (p, q) = (&pts[i], &pts[j]);
                    let (u, v) = (&p[..mu], &q[..mu]);
                    let s = dot(p, q) - dot(u, v);
                    let w = (norm_sq(p) - norm_sq(u)) * (norm_sq(q) - norm_sq(v));
                    homogenized(&poly, s, w)
                })
                .collect()
        })
        .collect();
    SymmetricMatrix::from_upper(r, rows.concat())
}

/// `(a_ii a_jj)^{k/2} G_k^{(n)}(a_ij / sqrt(a_ii a_jj))`, defined for positive
/// semidefinite `A` of rank at most `n`.
pub fn h_map(a: &SymmetricMatrix, n: u32, k: u32, tol: f64) -> Result<SymmetricMatrix> {
    if a.diagonal().iter().any(|&x| x < 0.0) {
        return Err(Error::param("diagonal entries must be nonnegative"));
    }
    let rank = a.psd_rank(tol)?;
    if rank > n as usize {
        return Err(Error::RankTooLarge { rank, limit: n as usize });
    }
    let poly = coeffs_1d(n, k)?;
    SymmetricMatrix::from_fn(a.dim(), |i, j| homogenized(&poly, a.get(i, j), a.get(i, i) * a.get(j, j)))
}
