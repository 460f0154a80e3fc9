//! One-dimensional and multivariate Gegenbauer polynomials.

mod addition;
mod expansion;
mod multivariate;
mod orthogonality;
mod polyfile;
mod recurrence;

pub use addition::{
    addition_coefficients, addition_residual, addition_term, telescope, AdditionCoefficients, PROJECTION_NODES,
    PROJECTION_RESIDUAL_LIMIT,
};
pub use expansion::{
    coefficient_matrix, expand_in_t, gmv_tpoly, is_psd_function, sample_psd_function, FunctionPsdReport, SAMPLER_POINTS,
};
pub use multivariate::{
    binomial, eval_mv, eval_mv_raw, monomial_exponents, monomial_vector, q_matrix, z_outer, MultivariateInput,
};
pub use orthogonality::{
    orthogonality_mc, orthogonality_quad, weighted_inner_1d, MonteCarloEstimate, QuadratureResult, Weight,
    MIN_MC_SAMPLES,
};
pub use polyfile::{MonomialEntry, PolynomialFile, TPowerEntry};
pub use recurrence::{coeffs_1d, eval_1d, eval_1d_all, GegenbauerPolynomial};

pub(crate) use multivariate::{check_levels, eval_with, homogenized};
