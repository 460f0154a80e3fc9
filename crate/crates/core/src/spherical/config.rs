use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::symlin::{dot, norm_sq, parse_csv_rows, rows_to_csv, SymmetricMatrix};

/// Tolerance on `|p_i| = 1` for sphere configurations.
pub const UNIT_TOL: f64 = 1e-12;

/// Points `p_1, .., p_r` in `R^n`, on the unit sphere unless built with
/// [`PointConfiguration::new_euclidean`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    n: usize,
    points: Vec<Vec<f64>>,
    #[serde(default = "default_sphere", skip_serializing)]
    sphere: bool,
}

fn default_sphere() -> bool {
    true
}

impl PointConfiguration {
    /// Unit vectors in `R^n`; norms must be 1 within [`UNIT_TOL`].
    pub fn new_sphere(n: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("sphere dimension must be positive"));
        }
        check_lengths(n, &points)?;
        for (i, p) in points.iter().enumerate() {
            let norm = norm_sq(p).sqrt();
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(Error::param(format!("point {i} has norm {norm}, expected 1")));
            }
        }
        Ok(Self { n, points, sphere: true })
    }

    /// Scale every point to unit length; zero vectors are rejected.
    pub fn normalized(n: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        check_lengths(n, &points)?;
        let mut out = Vec::with_capacity(points.len());
        for (i, p) in points.into_iter().enumerate() {
            let norm = norm_sq(&p).sqrt();
            if norm == 0.0 {
                return Err(Error::param(format!("point {i} is zero")));
            }
            out.push(p.into_iter().map(|x| x / norm).collect());
        }
        Self::new_sphere(n, out)
    }

    /// Arbitrary vectors in `R^n`, `n` may be zero.
    pub fn new_euclidean(n: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        check_lengths(n, &points)?;
        Ok(Self { n, points, sphere: false })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_sphere(&self) -> bool {
        self.sphere
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    /// Coordinate prefixes `p^(m)`.
    pub fn project(&self, m: usize) -> Result<Vec<Vec<f64>>> {
        if m > self.n {
            return Err(Error::param(format!("projection count {m} exceeds dimension {}", self.n)));
        }
        Ok(self.points.iter().map(|p| p[..m].to_vec()).collect())
    }

    /// Largest off-diagonal inner product.
    pub fn max_inner_product(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for i in 0..self.len() {
            for j in 0..i {
                let t = dot(&self.points[i], &self.points[j]);
                best = Some(best.map_or(t, |b| b.max(t)));
            }
        }
        best
    }

    /// Express the points in an orthonormal basis whose first vectors span
    /// `q` (Gram-Schmidt on `q`, completed by the standard basis).
    pub fn rotate_to_frame(&self, q: &[Vec<f64>]) -> Result<Self> {
        let frame = orthonormal_frame(self.n, q)?;
        let points = self.points.iter().map(|p| frame.iter().map(|e| dot(e, p)).collect()).collect();
        Ok(Self { n: self.n, points, sphere: self.sphere })
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = parse_csv_rows(text)?;
        let n = rows.first().map(Vec::len).ok_or(Error::EmptyConfiguration)?;
        Self::new_sphere(n, rows)
    }

    pub fn to_csv(&self) -> String {
        rows_to_csv(&self.points)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PointConfiguration = serde_json::from_str(text)?;
        Self::new_sphere(raw.n, raw.points)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("points serialize")
    }
}

fn check_lengths(n: usize, points: &[Vec<f64>]) -> Result<()> {
    for p in points {
        if p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: p.len() });
        }
    }
    Ok(())
}

/// Orthonormal basis of `R^n` starting with the Gram-Schmidt orthonormalization
/// of `q`. Fails if `q` is linearly dependent.
pub fn orthonormal_frame(n: usize, q: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    check_lengths(n, q)?;
    if q.len() > n {
        return Err(Error::RankTooLarge { rank: q.len(), limit: n });
    }
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(n);
    let push = |frame: &mut Vec<Vec<f64>>, v: &[f64]| -> bool {
        let mut w = v.to_vec();
        for _ in 0..2 {
            for e in frame.iter() {
                let c = dot(e, &w);
                w.iter_mut().zip(e).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = norm_sq(&w).sqrt();
        if norm < 1e-10 * norm_sq(v).sqrt().max(1e-300) {
            return false;
        }
        frame.push(w.into_iter().map(|x| x / norm).collect());
        true
    };
    for v in q {
        if !push(&mut frame, v) {
            return Err(Error::param("frame vectors are linearly dependent"));
        }
    }
    for i in 0..n {
        if frame.len() == n {
            break;
        }
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        push(&mut frame, &e);
    }
    Ok(frame)
}

/// `r` independent uniform points on `S^{n-1}`.
pub fn sample_sphere(n: usize, r: usize, seed: u64) -> Result<PointConfiguration> {
    if n < 2 {
        return Err(Error::param(format!("sphere sampling needs n >= 2, got {n}")));
    }
    if r == 0 {
        return Err(Error::param("sphere sampling needs r >= 1"));
    }
    let mut rng = SplitMix64::new(seed);
    let points = (0..r).map(|_| rng.unit_vector(n)).collect();
    PointConfiguration::new_sphere(n, points)
}

/// `simplex(n)`, `cross_polytope(n)` or `icosahedron`.
pub fn named_code(name: &str) -> Result<PointConfiguration> {
    let name = name.trim();
    let unknown = || Error::UnknownCode(name.to_string());
    if name == "icosahedron" {
        return icosahedron();
    }
    let (family, arg) = name.strip_suffix(')').and_then(|s| s.split_once('(')).ok_or_else(unknown)?;
    let n: usize = arg.trim().parse().map_err(|_| unknown())?;
    match family.trim() {
        "simplex" => simplex(n),
        "cross_polytope" => cross_polytope(n),
        _ => Err(unknown()),
    }
}

fn cross_polytope(n: usize) -> Result<PointConfiguration> {
    if n < 1 {
        return Err(Error::param("cross_polytope needs n >= 1"));
    }
    let mut points = Vec::with_capacity(2 * n);
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut p = vec![0.0; n];
            p[i] = sign;
            points.push(p);
        }
    }
    PointConfiguration::new_sphere(n, points)
}

/// `n + 1` points with pairwise inner product `-1/n`, realized from the Gram
/// matrix.
fn simplex(n: usize) -> Result<PointConfiguration> {
    if n < 1 {
        return Err(Error::param("simplex needs n >= 1"));
    }
    let gram = SymmetricMatrix::from_fn(n + 1, |i, j| if i == j { 1.0 } else { -1.0 / n as f64 })?;
    let real = gram.realize(1e-10)?;
    let mut points = real.points().to_vec();
    for p in &mut points {
        p.resize(n, 0.0);
    }
    PointConfiguration::normalized(n, points)
}

fn icosahedron() -> Result<PointConfiguration> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let scale = (1.0 + phi * phi).sqrt();
    let mut points = Vec::with_capacity(12);
    for a in [1.0, -1.0] {
        for b in [phi, -phi] {
            points.push(vec![0.0, a / scale, b / scale]);
            points.push(vec![a / scale, b / scale, 0.0]);
            points.push(vec![b / scale, 0.0, a / scale]);
        }
    }
    PointConfiguration::normalized(3, points)
}
