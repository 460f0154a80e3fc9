//! Point configurations on the sphere and the positive semidefinite kernel
//! matrices built from them.

mod config;
mod kernel;

pub use config::{named_code, orthonormal_frame, sample_sphere, PointConfiguration, UNIT_TOL};
pub use kernel::{
    bv_matrices, eval_coefficient_function, factorized_kernel, kernel_matrix, verify_corollary31, BvMatrices,
    KernelMatrix,
};
