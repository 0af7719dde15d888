//! Interpolation weights, the quadrature of complex-power chain norms against
//! them, and the Golden–Thompson / Lie–Trotter limits.

mod bounds;
mod density;
mod quadrature;
mod trotter;

pub use bounds::{
    complex_chain_log_norm, gt_lhs, gt_rhs, hirschman_lhs, hirschman_rhs, verify_gt, verify_hirschman,
    weighted_log_norm, INTEGRAND_FLOOR,
};
pub use density::{alpha_density, beta_density, beta_zero_density, DensityParams, Weight};
pub use quadrature::{gauss_legendre, integrate, total_mass, QuadResult, QuadratureConfig, TailBound};
pub use trotter::{lie_trotter_convergence, lie_trotter_value, TrotterRow, TrotterTable};
