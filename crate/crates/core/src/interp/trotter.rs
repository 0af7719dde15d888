//! The symmetrized product `C_L^{1/2p} ⋯ C_2^{1/2p} C_1^{1/p} C_2^{1/2p} ⋯ C_L^{1/2p}`,
//! whose `p`-th power has trace tending to `Tr exp(Σ log C_i)`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matcore::{symmetrize, ComplexMatrix, PsdOperator};
use crate::swivelopt::ChainInstance;

use super::bounds::gt_lhs;

/// `Tr[(C_L^{1/2p} ⋯ C_1^{1/p} ⋯ C_L^{1/2p})^p]`, the power taken spectrally.
pub fn lie_trotter_value(inst: &ChainInstance, p: f64) -> Result<f64> {
    crate::swivelopt::check_p(p)?;
    let ops = inst.operators();
    let n = inst.dim();
    let right = ops[1..]
        .iter()
        .fold(ComplexMatrix::identity(n, n), |m, c| m * c.real_power(0.5 / p));
    let s = right.adjoint() * ops[0].real_power(1.0 / p) * &right;
    let s = PsdOperator::new(&symmetrize(&s)?)?;
    Ok(s.eigenvalues()
        .iter()
        .filter(|&&l| s.in_support(l))
        .map(|l| l.powf(p))
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrotterRow {
    pub p: f64,
    pub value: f64,
    pub abs_error: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrotterTable {
    /// `Tr exp(Σ log C_i)`.
    pub reference: f64,
    pub rows: Vec<TrotterRow>,
}

impl TrotterTable {
    /// Whether the last row has the smallest relative error, counting errors
    /// within `tie` of each other as equal.
    pub fn final_is_smallest(&self, tie: f64) -> bool {
        let Some(last) = self.rows.last() else {
            return true;
        };
        self.rows.iter().all(|r| last.rel_error <= r.rel_error + tie)
    }
}

/// Values and errors against `Tr exp(Σ log C_i)` over `p_list`. Requires
/// positive definite operators.
pub fn lie_trotter_convergence(inst: &ChainInstance, p_list: &[f64]) -> Result<TrotterTable> {
    let reference = gt_lhs(inst)?.exp();
    let rows = p_list
        .iter()
        .map(|&p| {
            let value = lie_trotter_value(inst, p)?;
            let abs_error = (value - reference).abs();
            Ok(TrotterRow {
                p,
                value,
                abs_error,
                rel_error: abs_error / reference,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrotterTable { reference, rows })
}
