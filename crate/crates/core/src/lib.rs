//! Multivariate Gegenbauer polynomials, positive semidefinite kernels on the
//! sphere, and bounds for spherical codes.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod codebounds;
pub mod constraints;
pub mod error;
pub mod gegenbauer;
pub mod poly;
pub mod quadrature;
pub mod rng;
pub mod spherical;
pub mod symlin;

pub use error::{Error, Result};
