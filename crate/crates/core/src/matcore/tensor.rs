//! Tensor-product bookkeeping.
//!
//! Layout is lexicographic with factor 0 as the slowest index: for dims
//! `(d0, d1, d2)` the basis vector `|i0 i1 i2>` sits at `(i0*d1 + i1)*d2 + i2`.

use serde::{Deserialize, Serialize};

use super::{c64, ComplexMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TensorShape {
    factor_dims: Vec<usize>,
}

impl TensorShape {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(Error::ShapeMismatch(format!(
                "factor dims must be non-empty and positive, got {factor_dims:?}"
            )));
        }
        Ok(Self { factor_dims })
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    pub fn num_factors(&self) -> usize {
        self.factor_dims.len()
    }

    fn strides(&self) -> Vec<usize> {
        let k = self.factor_dims.len();
        let mut strides = vec![1; k];
        for f in (0..k.saturating_sub(1)).rev() {
            strides[f] = strides[f + 1] * self.factor_dims[f + 1];
        }
        strides
    }

    /// Full-space offsets of every basis state of the sub-system `factors`
    /// (listed order, first factor slowest), with all other digits zero.
    fn offsets(&self, factors: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut out = vec![0usize];
        for &f in factors {
            let d = self.factor_dims[f];
            let mut next = Vec::with_capacity(out.len() * d);
            for &base in &out {
                for digit in 0..d {
                    next.push(base + digit * strides[f]);
                }
            }
            out = next;
        }
        out
    }

    fn check_factors(&self, factors: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.num_factors()];
        for &f in factors {
            if f >= self.num_factors() || seen[f] {
                return Err(Error::ShapeMismatch(format!(
                    "invalid factor list {factors:?} for shape {:?}",
                    self.factor_dims
                )));
            }
            seen[f] = true;
        }
        Ok(())
    }

    fn complement(&self, factors: &[usize]) -> Vec<usize> {
        (0..self.num_factors())
            .filter(|f| !factors.contains(f))
            .collect()
    }
}

/// Traces out `traced` factors of `m`. The kept factors stay in their original order.
pub fn partial_trace(m: &ComplexMatrix, shape: &TensorShape, traced: &[usize]) -> Result<ComplexMatrix> {
    if !m.is_square() || m.nrows() != shape.dim() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix does not match shape {:?}",
            m.nrows(),
            m.ncols(),
            shape.factor_dims()
        )));
    }
    shape.check_factors(traced)?;
    let mut traced_sorted = traced.to_vec();
    traced_sorted.sort_unstable();
    let kept = shape.complement(&traced_sorted);
    let kept_off = shape.offsets(&kept);
    let traced_off = shape.offsets(&traced_sorted);
    let k = kept_off.len();
    let mut out = ComplexMatrix::zeros(k, k);
    for (r, &ro) in kept_off.iter().enumerate() {
        for (c, &co) in kept_off.iter().enumerate() {
            let mut acc = c64(0.0, 0.0);
            for &s in &traced_off {
                acc += m[(ro + s, co + s)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Lifts `op`, acting on the sub-system `factors` (listed order, first slowest),
/// to the full space with the identity on every other factor.
pub fn embed(op: &ComplexMatrix, shape: &TensorShape, factors: &[usize]) -> Result<ComplexMatrix> {
    shape.check_factors(factors)?;
    let sub_dim: usize = factors.iter().map(|&f| shape.factor_dims()[f]).product();
    if !op.is_square() || op.nrows() != sub_dim {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} operator cannot act on factors {factors:?} of {:?}",
            op.nrows(),
            op.ncols(),
            shape.factor_dims()
        )));
    }
    let sub_off = shape.offsets(factors);
    let rest_off = shape.offsets(&shape.complement(factors));
    let n = shape.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for &r in &rest_off {
        for (a, &ao) in sub_off.iter().enumerate() {
            for (b, &bo) in sub_off.iter().enumerate() {
                out[(ao + r, bo + r)] = op[(a, b)];
            }
        }
    }
    Ok(out)
}
