//! Schatten-norm chains `C_1^{1/p} V_1 C_2^{1/p} V_2 ⋯ C_L^{1/p} V_L` of positive
//! semi-definite operators, with each unitary `V_i` ranging over the commutant
//! of `C_i`.
//!
//! The crate maximizes the chain norm over these swivels and checks three
//! facts numerically: the maximum is non-increasing in `p`
//! ([`swivelopt::verify_monotone`]), the chain norm is bounded by a
//! `β_{q/p}`-weighted average of complex-power chain norms
//! ([`interp::verify_hirschman`]), and the `p → ∞` limit gives a
//! multi-operator Golden–Thompson bound ([`interp::verify_gt`]).
//!
//! Examples, one per capability (`cargo run --release --example <name>`):
//!
//! - `schatten_norms`: norms, powers on the support, `C^{it}` as a partial isometry
//! - `commutant_swivels`: block structure, random swivels, the optimizer
//! - `swivel_monotonicity`: the curve in `p` against the phase-grid oracle
//! - `marginal_chain`: the tripartite marginal chain on `A⊗B⊗C`
//! - `hirschman_bound`: interpolation bound with quadrature diagnostics
//! - `golden_thompson`: multi-operator Golden–Thompson, classic case included
//! - `lie_trotter`: convergence of the chain towards `Tr exp(Σ log C_i)`
//! - `instances_roundtrip`: instance files, reports and reruns
//!
//! The `swivel` binary wraps the same operations; see [`cli`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commutant;
pub mod error;
pub mod instgen;
pub mod interp;
pub mod matcore;
pub mod report;
pub mod swivelopt;
pub mod tolerances;

pub use error::{Error, Result};
