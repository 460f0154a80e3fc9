use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pair::{augment, make_pair, FeasiblePair};
use crate::error::{Error, Result};
use crate::gegenbauer::{binomial, coeffs_1d, eval_with};
use crate::rng::SplitMix64;
use crate::spherical::{sample_sphere, PointConfiguration};
use crate::symlin::{dot, DenseMatrix, PsdReport, SymmetricMatrix};

/// Largest number of basis choices `s_lambda_member` will try.
pub const MAX_BASIS_CHOICES: u64 = 10_000;

/// Rank cutoff used by [`reconstruct`], relative to the matrix scale.
pub const RECONSTRUCT_RANK_TOL: f64 = 1e-7;

/// Tolerance on the quadratic identity in [`delta_member`].
pub const DELTA_IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub k: u32,
    pub report: PsdReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub m: usize,
    pub member: bool,
    pub degrees: Vec<DegreeReport>,
}

/// `(G_k^{(n,m)}(x_ij, v_i, v_j))`.
pub fn pair_kernel(x: &SymmetricMatrix, v: &DenseMatrix, n: usize, k: u32) -> Result<SymmetricMatrix> {
    let m = v.cols();
    if m + 2 > n {
        return Err(Error::param(format!("level m = {m} must satisfy m <= n - 2 (n = {n})")));
    }
    let poly = coeffs_1d((n - m) as u32, k)?;
    SymmetricMatrix::from_fn(x.dim(), |i, j| eval_with(&poly, x.get(i, j), v.row(i), v.row(j)))
}

/// Membership in `Lambda_{d,r}^{n,m}`: the kernels on the augmented pair are
/// positive semidefinite for `k = 1..d`.
pub fn lambda_member(pair: &FeasiblePair, m: usize, d: u32, tol: f64) -> Result<LevelReport> {
    if d < 1 {
        return Err(Error::param("degree bound d must be at least 1"));
    }
    let aug = augment(pair, m)?;
    let degrees = (1..=d)
        .into_par_iter()
        .map(|k| Ok(DegreeReport { k, report: pair_kernel(&aug.x, &aug.v, pair.n(), k)?.is_psd(tol) }))
        .collect::<Result<Vec<_>>>()?;
    Ok(LevelReport { m, member: degrees.iter().all(|d| d.report.is_psd), degrees })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricLevelReport {
    pub m: usize,
    pub member: bool,
    pub choices: u64,
    /// First basis choice (column indices of `U`) that failed.
    pub failing_choice: Option<Vec<usize>>,
}

/// Membership for every choice of `m` anchor columns out of the `n - 1`.
pub fn s_lambda_member(pair: &FeasiblePair, m: usize, d: u32, tol: f64) -> Result<SymmetricLevelReport> {
    let n = pair.n();
    if m < 1 || m + 2 > n {
        return Err(Error::param(format!("symmetric level needs 1 <= m <= n - 2, got m = {m}, n = {n}")));
    }
    let choices = binomial((n - 1) as u64, m as u64);
    if choices > MAX_BASIS_CHOICES {
        return Err(Error::param(format!("{choices} basis choices exceed the limit {MAX_BASIS_CHOICES}")));
    }
    let subsets = combinations(n - 1, m);
    let results = subsets
        .par_iter()
        .map(|subset| {
            let mut order = subset.clone();
            order.extend((0..n - 1).filter(|c| !subset.contains(c)));
            let report = lambda_member(&pair.with_column_order(&order)?, m, d, tol)?;
            Ok(report.member)
        })
        .collect::<Result<Vec<bool>>>()?;
    let failing_choice = results.iter().position(|ok| !ok).map(|i| subsets[i].clone());
    Ok(SymmetricLevelReport { m, member: failing_choice.is_none(), choices, failing_choice })
}

/// All `m`-subsets of `0..n`, lexicographic.
fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    if m > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..m).rev().find(|&i| cur[i] < n - m + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..m {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub member: bool,
    /// Eigencheck of `T - U U^T`.
    pub gram_defect: PsdReport,
    /// `max |(t_ij - <u_i,u_j>)^2 - (1 - |u_i|^2)(1 - |u_j|^2)|`.
    pub identity_residual: f64,
}

/// `T - U U^T` is positive semidefinite and
/// `(t_ij - <u_i,u_j>)^2 = (1 - |u_i|^2)(1 - |u_j|^2)` for all `i, j`.
pub fn delta_member(pair: &FeasiblePair, tol: f64) -> Result<DeltaReport> {
    let (t, u) = (pair.t(), pair.u());
    let r = pair.r();
    let defect = SymmetricMatrix::from_fn(r, |i, j| t.get(i, j) - dot(u.row(i), u.row(j)))?;
    let mut residual = 0.0f64;
    for i in 0..r {
        for j in 0..=i {
            let lhs = defect.get(i, j).powi(2);
            let rhs = (1.0 - dot(u.row(i), u.row(i))) * (1.0 - dot(u.row(j), u.row(j)));
            residual = residual.max((lhs - rhs).abs());
        }
    }
    let gram_defect = defect.is_psd(tol);
    Ok(DeltaReport {
        member: gram_defect.is_psd && residual <= DELTA_IDENTITY_TOL,
        gram_defect,
        identity_residual: residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub points: PointConfiguration,
    /// Orthonormal `e_1..e_{n-1}` with `u_ik = <p_i, e_k>`.
    pub basis: Vec<Vec<f64>>,
    pub rank: usize,
    /// Largest deviation from `T`, `U` and `delta_ij`.
    pub max_error: f64,
}

/// Points `p_1..p_r` and an orthonormal `e_1..e_{n-1}` realizing the pair,
/// from the Gram factorization of `X_0`.
pub fn reconstruct(pair: &FeasiblePair) -> Result<Reconstruction> {
    let n = pair.n();
    let r = pair.r();
    let x0 = augment(pair, 0)?.x;
    let rank = x0.psd_rank(RECONSTRUCT_RANK_TOL)?;
    if rank > n {
        return Err(Error::RankTooLarge { rank, limit: n });
    }
    let real = x0.realize(RECONSTRUCT_RANK_TOL)?;
    let q: Vec<Vec<f64>> = real
        .points()
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p.resize(n, 0.0);
            p
        })
        .collect();
    let points = PointConfiguration::normalized(n, q[..r].to_vec())?;
    let basis = q[r..].to_vec();
    let mut max_error = 0.0f64;
    for i in 0..r {
        for j in 0..r {
            max_error = max_error.max((dot(points.point(i), points.point(j)) - pair.t().get(i, j)).abs());
        }
        for (k, e) in basis.iter().enumerate() {
            max_error = max_error.max((dot(points.point(i), e) - pair.u().get(i, k)).abs());
        }
    }
    for (a, ea) in basis.iter().enumerate() {
        for (b, eb) in basis.iter().enumerate() {
            max_error = max_error.max((dot(ea, eb) - f64::from(a == b)).abs());
        }
    }
    Ok(Reconstruction { points, basis, rank, max_error })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub n: usize,
    pub r: usize,
    pub d: u32,
    /// `Lambda^{n,m}` for `m = 0..=n-2`.
    pub levels: Vec<LevelReport>,
    /// `S Lambda^{n,m}` for `m = 1..=n-2`; skipped when too many choices.
    pub symmetric_levels: Vec<SymmetricLevelReport>,
    pub delta: DeltaReport,
    /// No level `m + 1` holds while level `m` fails, and the symmetric and
    /// delta levels sit inside the levels below them.
    pub monotone: bool,
}

pub fn hierarchy_report(pair: &FeasiblePair, d: u32, tol: f64) -> Result<HierarchyReport> {
    let n = pair.n();
    let levels = (0..=n - 2).map(|m| lambda_member(pair, m, d, tol)).collect::<Result<Vec<_>>>()?;
    let mut symmetric_levels = Vec::new();
    for m in 1..=n - 2 {
        if binomial((n - 1) as u64, m as u64) <= MAX_BASIS_CHOICES {
            symmetric_levels.push(s_lambda_member(pair, m, d, tol)?);
        }
    }
    let delta = delta_member(pair, tol)?;
    let mut monotone = levels.windows(2).all(|w| !(w[1].member && !w[0].member));
    monotone &= symmetric_levels.windows(2).all(|w| !(w[1].member && !w[0].member));
    monotone &= symmetric_levels.iter().all(|s| !s.member || levels[s.m].member);
    if delta.member {
        monotone &= levels.iter().all(|l| l.member) && symmetric_levels.iter().all(|s| s.member);
    }
    Ok(HierarchyReport { n, r: pair.r(), d, levels, symmetric_levels, delta, monotone })
}

/// A pair with `T - U U^T` indefinite, so it fails every level at `k = 1`:
/// `T = U U^T + D^{1/2} C D^{1/2}` with `D = diag(1 - |u_i|^2)` and
/// `C = I + c (J - I)`, `c = -1.5 / (r - 1)`, whose smallest eigenvalue is `-0.5`.
pub fn eigenvalue_violator(n: usize, r: usize, seed: u64) -> Result<FeasiblePair> {
    if r < 3 {
        return Err(Error::param("eigenvalue violator needs r >= 3"));
    }
    let pts = sample_sphere(n, r, seed)?;
    let u = DenseMatrix::from_rows(&pts.project(n - 1)?)?;
    let c = -1.5 / (r as f64 - 1.0);
    let defect: Vec<f64> = (0..r).map(|i| (1.0 - dot(u.row(i), u.row(i))).max(0.0)).collect();
    let t = SymmetricMatrix::from_fn(r, |i, j| {
        if i == j {
            1.0
        } else {
            (dot(u.row(i), u.row(j)) + c * (defect[i] * defect[j]).sqrt()).clamp(-1.0, 1.0)
        }
    })?;
    make_pair(t, u, n)
}

/// Points of `S^{n+extra-1}` read as data for `R^n`: `p = (a, eps b) / |.|`
/// with `a` uniform on `S^{n-1}` and `b` Gaussian. `eps = 0` is realizable.
pub fn lifted_pair(n: usize, r: usize, extra: usize, eps: f64, seed: u64) -> Result<FeasiblePair> {
    let mut rng = SplitMix64::new(seed);
    let points = (0..r)
        .map(|_| {
            let mut p = rng.unit_vector(n);
            p.extend((0..extra).map(|_| eps * rng.gaussian()));
            p
        })
        .collect();
    let lifted = PointConfiguration::normalized(n + extra, points)?;
    let t = crate::symlin::gram(&lifted)?;
    let t = SymmetricMatrix::from_fn(r, |i, j| if i == j { 1.0 } else { t.get(i, j).clamp(-1.0, 1.0) })?;
    let u = DenseMatrix::from_fn(r, n - 1, |i, k| lifted.point(i)[k]);
    make_pair(t, u, n)
}

/// A lifted pair just past the point where the top level `m = n - 2` stops
/// holding, found by bisection on the lift size. Returns the pair and `eps`.
pub fn hierarchy_violator(n: usize, r: usize, d: u32, seed: u64, tol: f64) -> Result<(FeasiblePair, f64)> {
    if n < 3 {
        return Err(Error::param("hierarchy violator needs n >= 3"));
    }
    let top = n - 2;
    let extra = 2;
    let fails =
        |eps: f64| -> Result<bool> { Ok(!lambda_member(&lifted_pair(n, r, extra, eps, seed)?, top, d, tol)?.member) };
    let (mut lo, mut hi) = (0.0, 1.0);
    if fails(lo)? {
        return Err(Error::param("unlifted configuration already fails"));
    }
    while !fails(hi)? {
        hi *= 2.0;
        if hi > 64.0 {
            return Err(Error::param("no violation found; increase r or d"));
        }
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if fails(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lifted_pair(n, r, extra, hi, seed)?, hi))
}
