//! Numerical thresholds shared by every module.
//!
//! The defaults are fixed constants. A binary may install a different set once,
//! before any computation, with [`set_global`]; afterwards the values are
//! read-only.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    /// Relative slack on eigenvalues below zero before a matrix is rejected as non-PSD.
    pub hermitian_eps: f64,
    /// Entrywise asymmetry allowed before a matrix is rejected as non-Hermitian.
    pub symmetry_rel: f64,
    /// Eigenvalues at or below `support_cutoff_rel * lambda_max` are treated as zero.
    pub support_cutoff_rel: f64,
    /// Relative gap that separates two eigenvalue clusters.
    pub cluster_rel: f64,
    /// Unitarity residual allowed for swivel blocks.
    pub unitary: f64,
    /// Relative commutator residual allowed for assembled swivels.
    pub commutation: f64,
    /// Absolute slack for declaring an inequality to hold.
    pub verify: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian_eps: 1e-10,
            symmetry_rel: 1e-9,
            support_cutoff_rel: 1e-12,
            cluster_rel: 1e-8,
            unitary: 1e-9,
            commutation: 1e-8,
            verify: 1e-7,
        }
    }
}

static GLOBAL: OnceLock<Tolerances> = OnceLock::new();

/// Installs process-wide tolerances. Returns `false` if they were already fixed
/// (either by an earlier call or by a read).
pub fn set_global(tol: Tolerances) -> bool {
    GLOBAL.set(tol).is_ok()
}

pub fn get() -> &'static Tolerances {
    GLOBAL.get_or_init(Tolerances::default)
}
