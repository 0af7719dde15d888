//! Verification outcomes shared by the monotonicity, interpolation and
//! Golden–Thompson checks.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Inequality {
    /// Swivel-maximized chain norm is non-increasing in `p`.
    Monotone,
    /// Chain norm bounded by the `β_{q/p}`-average of complex-power chain norms.
    Hirschman,
    /// Multi-operator Golden–Thompson with the `β_0` weight.
    Gt,
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Inequality::Monotone => "monotone",
            Inequality::Hirschman => "hirschman",
            Inequality::Gt => "gt",
        })
    }
}

impl std::str::FromStr for Inequality {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "monotone" => Ok(Inequality::Monotone),
            "hirschman" => Ok(Inequality::Hirschman),
            "gt" => Ok(Inequality::Gt),
            _ => Err(crate::Error::DomainError(format!(
                "unknown inequality {s:?} (monotone, hirschman, gt)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Holds,
    ViolatedBeyondTol,
    /// A shortfall that may come from the optimizer (or the integrand), not
    /// from the inequality itself.
    InconclusiveOptimizerGap,
}

impl Status {
    /// HOLDS iff `slack >= -(tol + error_estimate)`; a NaN slack is inconclusive.
    pub fn from_slack(slack: f64, tol: f64, error_estimate: f64) -> Self {
        if slack.is_nan() {
            Status::InconclusiveOptimizerGap
        } else if slack >= -(tol + error_estimate) {
            Status::Holds
        } else {
            Status::ViolatedBeyondTol
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::ViolatedBeyondTol => 2,
            Status::InconclusiveOptimizerGap => 3,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "HOLDS",
            Status::ViolatedBeyondTol => "VIOLATED_BEYOND_TOL",
            Status::InconclusiveOptimizerGap => "INCONCLUSIVE_OPTIMIZER_GAP",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuadratureDiagnostics {
    pub error_estimate: f64,
    pub tail_bound: f64,
    /// False when the integrand bound behind `tail_bound` is heuristic
    /// (rank-deficient operators).
    pub tail_certified: bool,
    pub half_width: f64,
    pub panels: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OptimizerDiagnostics {
    pub p_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub restart_spreads: Vec<f64>,
    pub converged: Vec<bool>,
    /// Oracle curve over the same grid, when the instance admits one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_values: Option<Vec<f64>>,
    /// `(p_k, p_{k+1})` of the pair reported as lhs/rhs.
    pub worst_pair: (f64, f64),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureDiagnostics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerDiagnostics>,
    /// Eigenvalues clamped to zero while building the operators.
    pub clamp_count: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub inequality: Inequality,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub slack: f64,
    pub tolerance: f64,
    pub status: Status,
    pub diagnostics: Diagnostics,
}

impl VerificationReport {
    pub fn new(inequality: Inequality, lhs: f64, rhs: f64, tolerance: f64, error_estimate: f64, diagnostics: Diagnostics) -> Self {
        let slack = rhs - lhs;
        Self {
            inequality,
            lhs,
            rhs,
            slack,
            tolerance,
            status: Status::from_slack(slack, tolerance, error_estimate),
            diagnostics,
        }
    }
}
