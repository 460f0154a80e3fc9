use serde::{Deserialize, Serialize};

use super::matrix::SymmetricMatrix;
use crate::error::{Error, Result};
use crate::spherical::PointConfiguration;

const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

pub const DEFAULT_PSD_TOL: f64 = 1e-8;

/// Eigendecomposition `A = Q diag(values) Q^T`, values ascending.
/// `vectors[k]` is the unit eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl Eigen {
    /// Largest absolute eigenvalue.
    pub fn scale(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdReport {
    pub min_eigenvalue: f64,
    pub matrix_scale: f64,
    pub is_psd: bool,
    pub tolerance_used: f64,
}

impl PsdReport {
    fn from_values(values: &[f64], tol: f64) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let scale = values.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        Self { min_eigenvalue: min, matrix_scale: scale, is_psd: min >= -tol * scale.max(1.0), tolerance_used: tol }
    }

    /// `min_eigenvalue / max(scale, 1)`, the quantity compared against `-tol`.
    pub fn relative_min(&self) -> f64 {
        self.min_eigenvalue / self.matrix_scale.max(1.0)
    }
}

/// Cyclic Jacobi rotations on a dense row-major copy. Iterates until the
/// off-diagonal Frobenius norm drops below `1e-13 * max |a_ii|`.
fn jacobi(a: &SymmetricMatrix, want_vectors: bool) -> (Vec<f64>, Option<Vec<f64>>) {
    let n = a.dim();
    let mut m = a.to_dense();
    let mut v = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    });
    let mut d: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        let off = (2.0 * off).sqrt();
        let diag_scale = d.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if off == 0.0 || off < OFF_DIAGONAL_TOL * diag_scale {
            break;
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                // Negligible against both diagonal entries: drop it.
                if apq.abs() < 1e-18 * d[p].abs() && apq.abs() < 1e-18 * d[q].abs() {
                    m[p * n + q] = 0.0;
                    continue;
                }
                let h = d[q] - d[p];
                let theta = 0.5 * h / apq;
                let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                if theta < 0.0 {
                    t = -t;
                }
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                m[p * n + q] = 0.0;
                let rotate = |m: &mut Vec<f64>, i1: usize, j1: usize, i2: usize, j2: usize| {
                    let g = m[i1 * n + j1];
                    let hh = m[i2 * n + j2];
                    m[i1 * n + j1] = g - s * (hh + g * tau);
                    m[i2 * n + j2] = hh + s * (g - hh * tau);
                };
                for j in 0..p {
                    rotate(&mut m, j, p, j, q);
                }
                for j in (p + 1)..q {
                    rotate(&mut m, p, j, j, q);
                }
                for j in (q + 1)..n {
                    rotate(&mut m, p, j, q, j);
                }
                if let Some(v) = v.as_mut() {
                    for j in 0..n {
                        rotate(v, j, p, j, q);
                    }
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            z[p] = 0.0;
            d[p] = b[p];
        }
    }
    (d, v)
}

impl SymmetricMatrix {
    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (mut d, _) = jacobi(self, false);
        d.sort_by(f64::total_cmp);
        d
    }

    pub fn eigen(&self) -> Eigen {
        let n = self.dim();
        let (d, v) = jacobi(self, true);
        let v = v.expect("vectors requested");
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        Eigen {
            values: order.iter().map(|&k| d[k]).collect(),
            vectors: order.iter().map(|&k| (0..n).map(|i| v[i * n + k]).collect()).collect(),
        }
    }

    /// PSD test with the relative threshold `-tol * max(|lambda|_max, 1)`.
    pub fn is_psd(&self, tol: f64) -> PsdReport {
        PsdReport::from_values(&self.eigenvalues(), tol)
    }

    /// Number of eigenvalues above `tol * max(scale, 1)`. Errors if the matrix
    /// fails `is_psd(tol)`.
    pub fn psd_rank(&self, tol: f64) -> Result<usize> {
        let values = self.eigenvalues();
        let report = PsdReport::from_values(&values, tol);
        if !report.is_psd {
            return Err(Error::NotPsd { min_eigenvalue: report.min_eigenvalue });
        }
        let cut = tol * report.matrix_scale.max(1.0);
        Ok(values.iter().filter(|&&x| x > cut).count())
    }

    /// Points whose Gram matrix is this matrix: rows of `Q Lambda^{1/2}` over
    /// the eigenvalues above the rank cutoff, ordered by descending eigenvalue.
    pub fn realize(&self, tol: f64) -> Result<PointConfiguration> {
        let eig = self.eigen();
        let report = PsdReport::from_values(&eig.values, tol);
        if !report.is_psd {
            return Err(Error::NotPsd { min_eigenvalue: report.min_eigenvalue });
        }
        let cut = tol * report.matrix_scale.max(1.0);
        let kept: Vec<usize> = (0..eig.values.len()).rev().filter(|&k| eig.values[k] > cut).collect();
        let dim = kept.len();
        let points = (0..self.dim())
            .map(|i| {
                kept.iter()
                    .map(|&k| {
                        let mut x = eig.vectors[k][i] * eig.values[k].sqrt();
                        // Fix the sign gauge: first nonzero component of each
                        // eigenvector is positive.
                        if leading_sign(&eig.vectors[k]) < 0.0 {
                            x = -x;
                        }
                        x
                    })
                    .collect()
            })
            .collect();
        PointConfiguration::new_euclidean(dim, points)
    }
}

fn leading_sign(v: &[f64]) -> f64 {
    v.iter().find(|x| x.abs() > 1e-12).map_or(1.0, |x| x.signum())
}
