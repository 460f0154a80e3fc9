//! Bounds for spherical codes: partition patterns and their counting
//! polynomials, suprema over the pattern domains, the Delsarte bound and its
//! linear-programming optimum, and the level-`m` generalization.

mod certificate;
mod codes;
mod delsarte;
mod domain;
mod patterns;
pub mod simplex;
mod theorem61;

pub use certificate::{
    check_theta, gegenbauer_expand, gegenbauer_sum, max_on_interval, pair_count, pair_index, parse_angle,
    verify_nonpositive, CodeProblem, PairPolynomial, PairTerm, MAX_CERTIFICATE_DEGREE, NONPOSITIVE_GRID,
    NONPOSITIVE_TOL,
};
pub use codes::{audit_certificate, audit_code, code_audit, greedy_code, CodeAudit, AUDIT_TOL};
pub use delsarte::{delsarte_bound, delsarte_lp, BoundCertificate, COEFF_TOL, MAX_LP_DEGREE, MIN_LP_GRID};
pub use domain::{estimate_all, estimate_b, pattern_of_x, BEstimate, COINCIDENCE_TOL, MAX_DOMAIN_POINTS};
pub use patterns::{
    enumerate_patterns, pattern_of, q_omega, q_omega_f64, q_tilde, q_tilde_brute, set_partitions, PartitionPattern,
    MAX_BRUTE_TUPLES, MAX_PATTERN_DEGREE,
};
pub use theorem61::{
    theorem61_bound, theorem61_residual, PairAverageCertificate, Theorem61Bound, MAX_SCAN, RESIDUAL_REL_TOL,
};
