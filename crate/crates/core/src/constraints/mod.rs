//! Feasible pairs `(T, U)`, the hierarchy of positive semidefinite
//! constraints on them, and the Euclidean kernels `H_k`.

mod euclid;
mod hierarchy;
mod pair;

pub use euclid::{euclid_kernel, h_map};
pub use hierarchy::{
    delta_member, eigenvalue_violator, hierarchy_report, hierarchy_violator, lambda_member, lifted_pair, pair_kernel,
    reconstruct, s_lambda_member, DegreeReport, DeltaReport, HierarchyReport, LevelReport, Reconstruction,
    SymmetricLevelReport, DELTA_IDENTITY_TOL, MAX_BASIS_CHOICES, RECONSTRUCT_RANK_TOL,
};
pub use pair::{augment, make_pair, AugmentedPair, FeasiblePair};
