use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spherical::PointConfiguration;
use crate::symlin::{gram, DenseMatrix, SymmetricMatrix};

const FEASIBILITY_TOL: f64 = 1e-12;

/// Inner-product data `T` (`r x r`) and anchor data `U` (`r x (n-1)`).
#[derive(Debug, Clone, PartialEq)]
pub struct FeasiblePair {
    n: usize,
    t: SymmetricMatrix,
    u: DenseMatrix,
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    n: usize,
    #[serde(rename = "T")]
    t: Vec<Vec<f64>>,
    #[serde(rename = "U")]
    u: Vec<Vec<f64>>,
}

/// Validate `t_ii = 1`, `|t_ij| <= 1` and `|u_i| <= 1`, reporting every
/// violated condition.
pub fn make_pair(t: SymmetricMatrix, u: DenseMatrix, n: usize) -> Result<FeasiblePair> {
    if n < 2 {
        return Err(Error::param(format!("ambient dimension n = {n} must be at least 2")));
    }
    let r = t.dim();
    if u.rows() != r {
        return Err(Error::DimensionMismatch { expected: r, actual: u.rows() });
    }
    if u.cols() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, actual: u.cols() });
    }
    let mut problems = Vec::new();
    for i in 0..r {
        if (t.get(i, i) - 1.0).abs() > FEASIBILITY_TOL {
            problems.push(format!("t[{i}][{i}] = {} is not 1", t.get(i, i)));
        }
        for j in 0..i {
            if t.get(i, j).abs() > 1.0 + FEASIBILITY_TOL {
                problems.push(format!("t[{i}][{j}] = {} outside [-1, 1]", t.get(i, j)));
            }
        }
        let norm = u.row(i).iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1.0 + FEASIBILITY_TOL {
            problems.push(format!("row {i} of U has norm {norm} > 1"));
        }
    }
    if problems.is_empty() {
        Ok(FeasiblePair { n, t, u })
    } else {
        Err(Error::InfeasiblePair(problems))
    }
}

impl FeasiblePair {
    /// `T = (<p_i, p_j>)`, `U` = first `n - 1` coordinates.
    pub fn from_points(points: &PointConfiguration) -> Result<Self> {
        let n = points.n();
        if n < 2 {
            return Err(Error::param("points must live in R^n with n >= 2"));
        }
        let t = gram(points)?;
        let t = SymmetricMatrix::from_fn(t.dim(), |i, j| if i == j { 1.0 } else { t.get(i, j).clamp(-1.0, 1.0) })?;
        let u = DenseMatrix::from_rows(&points.project(n - 1)?)?;
        make_pair(t, u, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.t.dim()
    }

    pub fn t(&self) -> &SymmetricMatrix {
        &self.t
    }

    pub fn u(&self) -> &DenseMatrix {
        &self.u
    }

    /// Same pair with the columns of `U` reordered.
    pub fn with_column_order(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n - 1 {
            return Err(Error::DimensionMismatch { expected: self.n - 1, actual: order.len() });
        }
        Ok(Self { n: self.n, t: self.t.clone(), u: self.u.select_columns(order) })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PairJson = serde_json::from_str(text)?;
        let t = SymmetricMatrix::from_rows(&raw.t)?;
        let u = if raw.u.is_empty() {
            DenseMatrix::zeros(0, raw.n.saturating_sub(1))
        } else {
            DenseMatrix::from_rows(&raw.u)?
        };
        make_pair(t, u, raw.n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PairJson { n: self.n, t: self.t.to_rows(), u: self.u.to_rows() })
            .expect("pair serializes")
    }
}

/// `X_m` and `V_m` for the points `p_1..p_r, e_{m+1}..e_{n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentedPair {
    pub m: usize,
    pub x: SymmetricMatrix,
    pub v: DenseMatrix,
}

pub fn augment(pair: &FeasiblePair, m: usize) -> Result<AugmentedPair> {
    let n = pair.n;
    if m + 2 > n {
        return Err(Error::param(format!("level m = {m} must satisfy m <= n - 2 (n = {n})")));
    }
    let r = pair.r();
    let size = r + n - m - 1;
    let x = SymmetricMatrix::from_fn(size, |i, j| match (i < r, j < r) {
        (true, true) => pair.t.get(i, j),
        (true, false) => pair.u.get(i, m + j - r),
        (false, false) => f64::from(i == j),
        (false, true) => unreachable!("from_fn visits i <= j"),
    })?;
    let v = DenseMatrix::from_fn(size, m, |i, k| if i < r { pair.u.get(i, k) } else { 0.0 });
    Ok(AugmentedPair { m, x, v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spherical::sample_sphere;
    use crate::symlin::dot;

    fn pair_from_seed(n: usize, r: usize, seed: u64) -> (PointConfiguration, FeasiblePair) {
        let pts = sample_sphere(n, r, seed).unwrap();
        let pair = FeasiblePair::from_points(&pts).unwrap();
        (pts, pair)
    }

    #[test]
    fn realizable_pair_is_feasible() {
        let (_, pair) = pair_from_seed(5, 7, 1);
        assert_eq!(pair.r(), 7);
        assert_eq!(pair.u().cols(), 4);
    }

    #[test]
    fn violations_are_listed() {
        let t = SymmetricMatrix::from_rows(&[vec![0.9, 1.5], vec![1.5, 1.0]]).unwrap();
        let u = DenseMatrix::from_rows(&[vec![1.2, 0.0], vec![0.0, 0.0]]).unwrap();
        match make_pair(t, u, 3) {
            Err(Error::InfeasiblePair(p)) => assert_eq!(p.len(), 3, "{p:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shape_errors() {
        let t = SymmetricMatrix::identity(2).unwrap();
        assert!(make_pair(t.clone(), DenseMatrix::zeros(2, 3), 3).is_err());
        assert!(make_pair(t, DenseMatrix::zeros(3, 2), 3).is_err());
    }

    #[test]
    fn augmentation_is_gram_of_extended_points() {
        let (pts, pair) = pair_from_seed(5, 4, 2);
        for m in 0..=3 {
            let aug = augment(&pair, m).unwrap();
            assert_eq!(aug.x.dim(), 4 + 5 - m - 1);
            let mut q: Vec<Vec<f64>> = pts.points().to_vec();
            for b in m..4 {
                let mut e = vec![0.0; 5];
                e[b] = 1.0;
                q.push(e);
            }
            for i in 0..q.len() {
                for j in 0..q.len() {
                    assert!((aug.x.get(i, j) - dot(&q[i], &q[j])).abs() < 1e-15);
                }
                for k in 0..m {
                    assert_eq!(aug.v.get(i, k), q[i][k]);
                }
            }
        }
        assert!(augment(&pair, 4).is_err());
        assert_eq!(augment(&pair, 0).unwrap().v.cols(), 0);
    }

    #[test]
    fn json_round_trip() {
        let (_, pair) = pair_from_seed(4, 3, 3);
        assert_eq!(FeasiblePair::from_json(&pair.to_json()).unwrap(), pair);
        assert!(FeasiblePair::from_json("{\"n\":3}").is_err());
    }
}
