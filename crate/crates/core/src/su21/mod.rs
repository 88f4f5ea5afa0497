//! The homogeneous space `SU(2,1)/S^1` with the metric
//! `(X, Y) = (1+t) B(X1, Y1) + B(X2, Y2)`.
//!
//! Algebra identities run in exact rational arithmetic; sampling and scans
//! use `f64` through the same generic code.

mod algebra;
mod euler;
mod identities;
mod model;
mod scan;

pub use algebra::{parse_rational, pretty, AlgebraElement, Exact, Mat3, Scalar};
pub use euler::{
    euler_arnold_phi_form, euler_arnold_residual, euler_arnold_rhs, nonintegrability_witness, phi,
    NonIntegrabilityWitness,
};
pub use identities::{
    ad_invariance_failures, allowed_blocks, block_of, bracket_containments, determinant_identity_random, exact_suite,
    jacobi_failures, random_rational_tangent, ContainmentCheck, DeterminantReport, ExactSuite, RationalPairFailure,
};
pub use model::{
    curvature_quartic, curvature_quartic_expanded, det_four_squares_check, det_identity_check, eta, feasibility_of,
    feasible, gram_direct, ineq4_lhs, lower_bound, metric_t, xyz_and_gram, Feasibility, ModelParams, QuarticTerms,
    Xyz,
};
pub use scan::{
    grid_axis, has_feasible_k, random_tangent_pair, sampled_margin, scan_region, FeasibilityCell, FeasibilityGrid,
    MarginReport, RowInterval, SampleConfig,
};
