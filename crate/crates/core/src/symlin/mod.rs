//! Dense symmetric linear algebra: cyclic Jacobi eigenvalues, PSD tests,
//! Schur products, Gram matrices and their point realizations.

mod eigen;
mod io;
mod matrix;

pub use eigen::{Eigen, PsdReport, DEFAULT_PSD_TOL};
pub use matrix::{congruence, dot, hadamard, norm_sq, DenseMatrix, SymmetricMatrix};

pub(crate) use io::{parse_csv_rows, rows_to_csv};

use crate::error::{Error, Result};
use crate::spherical::PointConfiguration;

/// Gram matrix `(<p_i, p_j>)` of a configuration.
pub fn gram(points: &PointConfiguration) -> Result<SymmetricMatrix> {
    let pts = points.points();
    if pts.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    SymmetricMatrix::from_fn(pts.len(), |i, j| dot(&pts[i], &pts[j]))
}
