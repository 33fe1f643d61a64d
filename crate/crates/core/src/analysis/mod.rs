//! Structure theory checks: symmetric subspaces and angle bounds, sparse
//! polynomials on roots of unity, and the randomized verifier suites.

pub mod orbits;
pub mod poly;
pub mod verify;

pub use orbits::{
    admissible_kappas, angle_orbit_bound, b_kappa, count_b_kappa_orbits, dim_v, kappa_orbits,
    kappa_symmetry_residual, shear, AngleOrbitBound, OrbitDecomposition, SymmetricSpace,
};
pub use poly::{density, encoding_product, encoding_zero_count, roots_in_mu_d, CoefficientKind};
pub use verify::{run_suite, structured_sample, Check, Suite, SuiteParams, VerifyReport, Witness};
