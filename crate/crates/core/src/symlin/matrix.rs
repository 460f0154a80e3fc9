use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense symmetric matrix. Only the upper triangle is stored (row-major,
/// packed); `get(i, j)` and `get(j, i)` read the same slot, so symmetry
/// holds by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PackedUpper")]
pub struct SymmetricMatrix {
    dim: usize,
    upper: Vec<f64>,
}

#[derive(Deserialize)]
struct PackedUpper {
    dim: usize,
    upper: Vec<f64>,
}

impl TryFrom<PackedUpper> for SymmetricMatrix {
    type Error = Error;

    fn try_from(raw: PackedUpper) -> Result<Self> {
        SymmetricMatrix::from_upper(raw.dim, raw.upper)
    }
}

#[inline]
fn packed_index(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * dim - i * (i + 1) / 2 + j
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("matrix dimension must be at least 1"));
        }
        Ok(Self { dim, upper: vec![0.0; dim * (dim + 1) / 2] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        Ok(m)
    }

    /// All-ones matrix.
    pub fn ones(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        m.upper.iter_mut().for_each(|x| *x = 1.0);
        Ok(m)
    }

    /// Build from a function of `(i, j)`; it is only called with `i <= j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        let mut idx = 0;
        for i in 0..dim {
            for j in i..dim {
                m.upper[idx] = f(i, j);
                idx += 1;
            }
        }
        Ok(m)
    }

    pub fn from_upper(dim: usize, upper: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("matrix dimension must be at least 1"));
        }
        let expected = dim * (dim + 1) / 2;
        if upper.len() != expected {
            return Err(Error::DimensionMismatch { expected, actual: upper.len() });
        }
        Ok(Self { dim, upper })
    }

    /// Build from full square rows. Rows must be symmetric up to
    /// `1e-12 * max(1, max |a_ij|)`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: row.len() });
            }
        }
        let amax = rows.iter().flatten().fold(1.0f64, |a, &x| a.max(x.abs()));
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (rows[i][j] - rows[j][i]).abs() > 1e-12 * amax {
                    return Err(Error::param(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[packed_index(self.dim, i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let idx = packed_index(self.dim, i, j);
        self.upper[idx] = value;
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Row-major full square copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.get(i, j);
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
    }

    /// Sum of all `dim^2` entries.
    pub fn entry_sum(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            s += self.get(i, i);
            for j in (i + 1)..self.dim {
                s += 2.0 * self.get(i, j);
            }
        }
        s
    }

    pub fn max_abs_diff(&self, other: &SymmetricMatrix) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self.upper.iter().zip(&other.upper).fold(0.0f64, |a, (x, y)| a.max((x - y).abs())))
    }

    pub fn add(&self, other: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        self.check_same_dim(other)?;
        let upper = self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, upper })
    }

    pub fn sub(&self, other: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        self.check_same_dim(other)?;
        let upper = self.upper.iter().zip(&other.upper).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, upper })
    }

    pub fn scaled(&self, factor: f64) -> SymmetricMatrix {
        Self { dim: self.dim, upper: self.upper.iter().map(|x| x * factor).collect() }
    }

    /// Frobenius inner product `<A, B> = sum_ij a_ij b_ij`.
    pub fn frobenius_dot(&self, other: &SymmetricMatrix) -> Result<f64> {
        self.check_same_dim(other)?;
        let mut s = 0.0;
        for i in 0..self.dim {
            s += self.get(i, i) * other.get(i, i);
            for j in (i + 1)..self.dim {
                s += 2.0 * self.get(i, j) * other.get(i, j);
            }
        }
        Ok(s)
    }

    /// Principal submatrix on the given index list.
    pub fn principal(&self, indices: &[usize]) -> Result<SymmetricMatrix> {
        SymmetricMatrix::from_fn(indices.len(), |a, b| self.get(indices[a], indices[b]))
    }

    /// Rank-one matrix `h h^T`.
    pub fn outer(h: &[f64]) -> Result<SymmetricMatrix> {
        SymmetricMatrix::from_fn(h.len(), |i, j| h[i] * h[j])
    }

    pub(crate) fn check_same_dim(&self, other: &SymmetricMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        Ok(())
    }
}

/// Plain row-major rectangular matrix, used for the non-square factors
/// (`U`, `V_m`, the congruence factor `W`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, actual: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// `M M^T`.
    pub fn gram_of_rows(&self) -> Result<SymmetricMatrix> {
        SymmetricMatrix::from_fn(self.rows, |i, j| dot(self.row(i), self.row(j)))
    }

    /// Keep the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

/// Entrywise (Schur) product.
pub fn hadamard(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    a.check_same_dim(b)?;
    let upper = a.upper.iter().zip(&b.upper).map(|(x, y)| x * y).collect();
    Ok(SymmetricMatrix { dim: a.dim, upper })
}

/// Congruence `W A W^T` with `W` of shape `p x dim(A)`.
pub fn congruence(w: &DenseMatrix, a: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    if w.cols() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), actual: w.cols() });
    }
    let n = a.dim();
    let dense = a.to_dense();
    // WA, p x n
    let wa = DenseMatrix::from_fn(w.rows(), n, |i, j| (0..n).map(|k| w.get(i, k) * dense[k * n + j]).sum());
    SymmetricMatrix::from_fn(w.rows(), |i, j| dot(wa.row(i), w.row(j)))
}
