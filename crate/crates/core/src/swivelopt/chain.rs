use crate::commutant::{CommutantStructure, SwivelAssignment};
use crate::error::{Error, Result};
use crate::matcore::{schatten_pow, ComplexMatrix, PsdOperator};

/// An ordered chain `C_1, …, C_L` of PSD operators of one dimension, with the
/// commutant structure of each operator precomputed.
#[derive(Debug, Clone)]
pub struct ChainInstance {
    operators: Vec<PsdOperator>,
    structures: Vec<CommutantStructure>,
    pub label: String,
    pub seed: u64,
}

impl ChainInstance {
    pub fn new(operators: Vec<PsdOperator>, label: impl Into<String>, seed: u64) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(Error::ShapeMismatch("a chain needs at least one operator".into()));
        };
        let n = first.dim();
        if let Some(bad) = operators.iter().position(|c| c.dim() != n) {
            return Err(Error::ShapeMismatch(format!(
                "operator {bad} has dim {}, expected {n}",
                operators[bad].dim()
            )));
        }
        let structures = operators.iter().map(CommutantStructure::of).collect();
        Ok(Self {
            operators,
            structures,
            label: label.into(),
            seed,
        })
    }

    pub fn from_matrices(matrices: &[ComplexMatrix], label: impl Into<String>, seed: u64) -> Result<Self> {
        let ops = matrices.iter().map(PsdOperator::new).collect::<Result<Vec<_>>>()?;
        Self::new(ops, label, seed)
    }

    pub fn operators(&self) -> &[PsdOperator] {
        &self.operators
    }

    pub fn structures(&self) -> &[CommutantStructure] {
        &self.structures
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    /// True when every operator's commutant consists of phases only.
    pub fn has_scalar_commutants(&self) -> bool {
        self.structures.iter().all(CommutantStructure::is_scalar)
    }

    pub fn all_positive_definite(&self) -> bool {
        self.operators.iter().all(PsdOperator::is_positive_definite)
    }

    /// `C_i^{1/p}` for every position.
    pub fn powers(&self, p: f64) -> Vec<ComplexMatrix> {
        self.operators.iter().map(|c| c.real_power(1.0 / p)).collect()
    }
}

/// `‖C_1^{1/p} V_1 ⋯ C_L^{1/p} V_L‖_p^p`, multiplied left to right.
pub fn chain_norm(inst: &ChainInstance, swivels: &SwivelAssignment, p: f64) -> Result<f64> {
    check_p(p)?;
    let vs = swivels.assemble(inst.structures())?;
    let mut m = ComplexMatrix::identity(inst.dim(), inst.dim());
    for (c, v) in inst.operators().iter().zip(&vs) {
        m = m * c.real_power(1.0 / p) * v;
    }
    schatten_pow(&m, p)
}

/// Chain product at identity swivels, `C_1^{1/p} ⋯ C_L^{1/p}`.
pub fn plain_product(inst: &ChainInstance, p: f64) -> ComplexMatrix {
    inst.powers(p)
        .into_iter()
        .fold(ComplexMatrix::identity(inst.dim(), inst.dim()), |m, c| m * c)
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 || p.is_infinite() {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}
