use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::PointConfiguration;
use crate::error::{Error, Result};
use crate::gegenbauer::{binomial, check_levels, coeffs_1d, eval_with, monomial_vector};
use crate::symlin::{congruence, dot, hadamard, norm_sq, DenseMatrix, PsdReport, SymmetricMatrix};

/// `(G_k^{(n,m)}(<p_i,p_j>, p_i^(m), p_j^(m)))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelMatrix {
    pub base: SymmetricMatrix,
    pub n: u32,
    pub m: u32,
    pub k: u32,
    pub source: String,
}

impl KernelMatrix {
    pub fn is_psd(&self, tol: f64) -> PsdReport {
        self.base.is_psd(tol)
    }
}

fn check_sphere(points: &PointConfiguration) -> Result<()> {
    if points.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    if !points.is_sphere() {
        return Err(Error::param("kernel matrices need a sphere configuration"));
    }
    Ok(())
}

/// Rows are filled in parallel; every entry depends only on its two points,
/// so the result is the same for any schedule.
fn fill_parallel(r: usize, entry: impl Fn(usize, usize) -> f64 + Sync) -> Result<SymmetricMatrix> {
    let rows: Vec<Vec<f64>> = (0..r).into_par_iter().map(|i| (i..r).map(|j| entry(i, j)).collect()).collect();
    SymmetricMatrix::from_upper(r, rows.concat())
}

pub fn kernel_matrix(points: &PointConfiguration, m: u32, k: u32) -> Result<KernelMatrix> {
    check_sphere(points)?;
    let n = points.n() as u32;
    check_levels(n, m)?;
    let poly = coeffs_1d(n - m, k)?;
    let pts = points.points();
    let mu = m as usize;
    let base = fill_parallel(pts.len(), |i, j| eval_with(&poly, dot(&pts[i], &pts[j]), &pts[i][..mu], &pts[j][..mu]))?;
    Ok(KernelMatrix { base, n, m, k, source: format!("{} points in R^{n}", pts.len()) })
}

/// The kernel as a Schur product `(h h^T) o (G_k^{(n-m)}(<y_i, y_j>))` with
/// `h_i = |x_i|^k`, `x_i` the part of `p_i` orthogonal to `e_1..e_m` and
/// `y_i = x_i / |x_i|`, or `y_i = e_n` when `x_i = 0`.
pub fn factorized_kernel(points: &PointConfiguration, m: u32, k: u32) -> Result<SymmetricMatrix> {
    check_sphere(points)?;
    let n = points.n() as u32;
    check_levels(n, m)?;
    let mu = m as usize;
    let mut h = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for p in points.points() {
        let x = &p[mu..];
        let norm = norm_sq(x).sqrt();
        h.push(norm.powi(k as i32));
        if norm > 0.0 {
            ys.push(x.iter().map(|c| c / norm).collect::<Vec<f64>>());
        } else {
            let mut e = vec![0.0; x.len()];
            *e.last_mut().expect("n - m >= 2") = 1.0;
            ys.push(e);
        }
    }
    let poly = coeffs_1d(n - m, k)?;
    let b = fill_parallel(ys.len(), |i, j| poly.eval(dot(&ys[i], &ys[j])))?;
    hadamard(&SymmetricMatrix::outer(&h)?, &b)
}

/// Matrices of the three-point constraint for `m = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BvMatrices {
    /// `A_l`, `r x r`.
    pub a: Vec<SymmetricMatrix>,
    /// `W_l`, `(d+1) x r`.
    pub w: Vec<DenseMatrix>,
    /// `Y_l = W_l A_l W_l^T`.
    pub y: Vec<SymmetricMatrix>,
    pub sum: SymmetricMatrix,
}

/// For each anchor `l`, take `e_1 = p_l` so that `u_i = t_{il}`:
/// `(A_l)_{ij} = G_k^{(n,1)}(t_ij, t_il, t_jl)`,
/// `(W_l)_{ij} = lambda_i G_i^{(n+2k)}(t_jl)` for `0 <= i <= d`, `1 <= j <= r`.
pub fn bv_matrices(points: &PointConfiguration, k: u32, d: u32, weights: &[f64]) -> Result<BvMatrices> {
    check_sphere(points)?;
    let n = points.n() as u32;
    check_levels(n, 1)?;
    if weights.len() != d as usize + 1 {
        return Err(Error::DimensionMismatch { expected: d as usize + 1, actual: weights.len() });
    }
    let pts = points.points();
    let r = pts.len();
    let t = fill_parallel(r, |i, j| dot(&pts[i], &pts[j]))?;
    let poly = coeffs_1d(n - 1, k)?;
    let w_polys = (0..=d).map(|i| coeffs_1d(n + 2 * k, i)).collect::<Result<Vec<_>>>()?;
    let mut out =
        BvMatrices { a: Vec::new(), w: Vec::new(), y: Vec::new(), sum: SymmetricMatrix::zeros(d as usize + 1)? };
    for l in 0..r {
        let a = fill_parallel(r, |i, j| eval_with(&poly, t.get(i, j), &[t.get(i, l)], &[t.get(j, l)]))?;
        let w = DenseMatrix::from_fn(d as usize + 1, r, |i, j| weights[i] * w_polys[i].eval(t.get(j, l)));
        let y = congruence(&w, &a)?;
        out.sum = out.sum.add(&y)?;
        out.a.push(a);
        out.w.push(w);
        out.y.push(y);
    }
    Ok(out)
}

/// `f(u, v) = <H, Z_d^m(u, v)> = z_d(u)^T H z_d(v)`.
pub fn eval_coefficient_function(h: &SymmetricMatrix, u: &[f64], v: &[f64], d: u32) -> Result<f64> {
    let zu = monomial_vector(u, d);
    let zv = monomial_vector(v, d);
    if h.dim() != zu.len() {
        return Err(Error::DimensionMismatch { expected: zu.len(), actual: h.dim() });
    }
    let mut acc = 0.0;
    for (i, a) in zu.iter().enumerate() {
        for (j, b) in zv.iter().enumerate() {
            acc += a * h.get(i, j) * b;
        }
    }
    Ok(acc)
}

/// Assemble `(F(<p_i,p_j>, p_i^(m), p_j^(m)))` for
/// `F = sum_k <H_k, Z_d^m> G_k^{(n,m)}` and eigencheck it. Every `H_k` must
/// itself be positive semidefinite.
pub fn verify_corollary31(
    points: &PointConfiguration,
    m: u32,
    h: &[SymmetricMatrix],
    d: u32,
    tol: f64,
) -> Result<PsdReport> {
    check_sphere(points)?;
    let n = points.n() as u32;
    check_levels(n, m)?;
    let size = binomial(u64::from(m + d), u64::from(m)) as usize;
    for hk in h {
        if hk.dim() != size {
            return Err(Error::DimensionMismatch { expected: size, actual: hk.dim() });
        }
        let report = hk.is_psd(tol);
        if !report.is_psd {
            return Err(Error::NotPsd { min_eigenvalue: report.min_eigenvalue });
        }
    }
    let polys = (0..h.len() as u32).map(|k| coeffs_1d(n - m, k)).collect::<Result<Vec<_>>>()?;
    let mu = m as usize;
    let pts = points.points();
    let z: Vec<Vec<f64>> = pts.iter().map(|p| monomial_vector(&p[..mu], d)).collect();
    let mat = fill_parallel(pts.len(), |i, j| {
        let t = dot(&pts[i], &pts[j]);
        let (u, v) = (&pts[i][..mu], &pts[j][..mu]);
        h.iter()
            .zip(&polys)
            .map(|(hk, g)| {
                let mut f = 0.0;
                for (a, za) in z[i].iter().enumerate() {
                    for (b, zb) in z[j].iter().enumerate() {
                        f += za * hk.get(a, b) * zb;
                    }
                }
                f * eval_with(g, t, u, v)
            })
            .sum()
    })?;
    Ok(mat.is_psd(tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::spherical::{named_code, sample_sphere};
    use crate::symlin::{gram, DEFAULT_PSD_TOL};
    use approx::assert_abs_diff_eq;

    #[test]
    fn degree_zero_is_all_ones() {
        let c = sample_sphere(5, 10, 1).unwrap();
        let k = kernel_matrix(&c, 2, 0).unwrap();
        assert_eq!(k.base, SymmetricMatrix::ones(10).unwrap());
    }

    #[test]
    fn m0_k1_is_gram() {
        let c = sample_sphere(4, 12, 2).unwrap();
        let k = kernel_matrix(&c, 0, 1).unwrap();
        assert!(k.base.max_abs_diff(&gram(&c).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn diagonal_entries() {
        let c = sample_sphere(6, 8, 3).unwrap();
        let k = kernel_matrix(&c, 3, 4).unwrap();
        for i in 0..8 {
            let u = &c.point(i)[..3];
            assert_abs_diff_eq!(k.base.get(i, i), (1.0 - norm_sq(u)).powi(4), epsilon = 1e-12);
        }
    }

    #[test]
    fn random_kernel_is_psd() {
        let c = sample_sphere(6, 50, 4).unwrap();
        let k = kernel_matrix(&c, 3, 4).unwrap();
        assert!(k.is_psd(DEFAULT_PSD_TOL).is_psd);
    }

    #[test]
    fn factorization_matches() {
        let c = sample_sphere(7, 20, 5).unwrap();
        for (m, k) in [(0, 3), (2, 2), (5, 4), (3, 5)] {
            let direct = kernel_matrix(&c, m, k).unwrap();
            let fact = factorized_kernel(&c, m, k).unwrap();
            assert!(direct.base.max_abs_diff(&fact).unwrap() < 1e-10);
        }
    }

    #[test]
    fn degenerate_projection_uses_last_axis() {
        // p = e_1 has x = 0 when m = 1.
        let c = PointConfiguration::new_sphere(3, vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.6, 0.8]]).unwrap();
        let direct = kernel_matrix(&c, 1, 2).unwrap();
        let fact = factorized_kernel(&c, 1, 2).unwrap();
        assert!(direct.base.max_abs_diff(&fact).unwrap() < 1e-14);
    }

    #[test]
    fn duplicated_points() {
        let base = sample_sphere(4, 5, 6).unwrap();
        let mut pts = base.points().to_vec();
        pts.extend_from_slice(base.points());
        let c = PointConfiguration::new_sphere(4, pts).unwrap();
        let k = kernel_matrix(&c, 1, 3).unwrap();
        assert!(k.is_psd(DEFAULT_PSD_TOL).is_psd);
    }

    #[test]
    fn kernel_parameter_errors() {
        let c = sample_sphere(4, 3, 1).unwrap();
        assert!(kernel_matrix(&c, 3, 1).is_err());
    }

    #[test]
    fn bv_constraints_hold() {
        let c = sample_sphere(4, 12, 7).unwrap();
        let weights = [1.0, 0.5, 0.25, 2.0];
        let bv = bv_matrices(&c, 2, 3, &weights).unwrap();
        assert_eq!(bv.a.len(), 12);
        for (a, y) in bv.a.iter().zip(&bv.y) {
            assert!(a.is_psd(DEFAULT_PSD_TOL).is_psd);
            assert!(y.is_psd(DEFAULT_PSD_TOL).is_psd);
        }
        assert!(bv.sum.is_psd(DEFAULT_PSD_TOL).is_psd);
    }

    #[test]
    fn bv_anchor_matches_rotated_kernel() {
        let c = sample_sphere(5, 6, 8).unwrap();
        let bv = bv_matrices(&c, 3, 0, &[1.0]).unwrap();
        for l in 0..6 {
            let rotated = c.rotate_to_frame(&[c.point(l).to_vec()]).unwrap();
            let k = kernel_matrix(&rotated, 1, 3).unwrap();
            assert!(bv.a[l].max_abs_diff(&k.base).unwrap() < 1e-12);
        }
    }

    #[test]
    fn bv_identity_selection() {
        // With d + 1 = r and W = I the congruence is A itself; check congruence directly.
        let c = sample_sphere(4, 4, 9).unwrap();
        let bv = bv_matrices(&c, 1, 0, &[1.0]).unwrap();
        let eye = DenseMatrix::from_fn(4, 4, |i, j| f64::from(i == j));
        assert_eq!(congruence(&eye, &bv.a[0]).unwrap(), bv.a[0]);
    }

    #[test]
    fn bv_antipodal_anchor() {
        let c = named_code("cross_polytope(3)").unwrap();
        let bv = bv_matrices(&c, 2, 2, &[1.0, 1.0, 1.0]).unwrap();
        assert!(bv.sum.is_psd(DEFAULT_PSD_TOL).is_psd);
    }

    #[test]
    fn corollary31_cases() {
        let c = sample_sphere(5, 30, 10).unwrap();
        let (m, d) = (2u32, 2u32);
        let size = binomial(4, 2) as usize;
        // f_0 = 1
        let mut h0 = SymmetricMatrix::zeros(size).unwrap();
        h0.set(0, 0, 1.0);
        let report = verify_corollary31(&c, m, &[h0], d, DEFAULT_PSD_TOL).unwrap();
        assert!(report.is_psd);
        // random PSD mixtures
        let mut rng = SplitMix64::new(11);
        let hs: Vec<SymmetricMatrix> = (0..4)
            .map(|_| {
                let g = DenseMatrix::from_fn(size, 3, |_, _| rng.uniform_in(-1.0, 1.0));
                g.gram_of_rows().unwrap()
            })
            .collect();
        assert!(verify_corollary31(&c, m, &hs, d, DEFAULT_PSD_TOL).unwrap().is_psd);
        // rank one alpha(u) alpha(v)
        let alpha: Vec<f64> = (0..size).map(|i| (i as f64) - 2.0).collect();
        let h1 = SymmetricMatrix::outer(&alpha).unwrap();
        let zero = SymmetricMatrix::zeros(size).unwrap();
        assert!(verify_corollary31(&c, m, &[zero, h1], d, DEFAULT_PSD_TOL).unwrap().is_psd);
    }

    #[test]
    fn corollary31_rejects_indefinite_h() {
        let c = sample_sphere(5, 5, 10).unwrap();
        let mut h = SymmetricMatrix::zeros(3).unwrap();
        h.set(1, 1, -1.0);
        assert!(matches!(verify_corollary31(&c, 2, &[h], 1, DEFAULT_PSD_TOL), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn coefficient_function_eval() {
        let alpha = [1.0, 2.0, -1.0];
        let h = SymmetricMatrix::outer(&alpha).unwrap();
        let (u, v) = ([0.3, 0.1], [-0.2, 0.5]);
        let au = 1.0 + 2.0 * 0.3 - 0.1;
        let av = 1.0 - 0.4 - 0.5;
        assert_abs_diff_eq!(eval_coefficient_function(&h, &u, &v, 1).unwrap(), au * av, epsilon = 1e-15);
    }
}
