//! Seeded instance generation and the on-disk formats for instances, reports
//! and sweep curves.

pub mod hexfloat;
pub mod random;
mod schema;

pub use schema::{
    instance_to_string, load_instance, load_report, parse_instance, save_instance, save_report,
    tool_version, write_atomic, write_csv, write_sweep_csv, InstanceDoc, InstanceKind, MatrixDoc,
    ReportFile, RunParameters, SweepRow, SCHEMA_VERSION,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{c64, hermitian_eigen, identity, trace, ComplexMatrix, PsdOperator, TensorShape};
use crate::swivelopt::ChainInstance;
use random::{hermitian_part, random_psd, random_psd_rank, random_unitary, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GenKind {
    Psd,
    Pd,
    Density,
    RankDeficient,
    CommutingFamily,
    TripartiteDensity,
}

impl std::str::FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidSpec(format!("unknown kind {s:?}")))
    }
}

fn default_condition_cap() -> f64 {
    1e4
}

fn default_operators() -> usize {
    1
}

/// What to generate. `dim` is used by every kind except `tripartiteDensity`,
/// which takes `factor_dims` (three factors, A slowest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenSpec {
    pub kind: GenKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor_dims: Option<Vec<usize>>,
    #[serde(default = "default_operators")]
    pub operators: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub seed: u64,
    #[serde(default = "default_condition_cap")]
    pub condition_cap: f64,
}

impl GenSpec {
    pub fn new(kind: GenKind, dim: usize, operators: usize, seed: u64) -> Self {
        Self {
            kind,
            dim: Some(dim),
            factor_dims: None,
            operators,
            rank: None,
            seed,
            condition_cap: default_condition_cap(),
        }
    }

    pub fn tripartite(factor_dims: Vec<usize>, seed: u64) -> Self {
        Self {
            kind: GenKind::TripartiteDensity,
            dim: None,
            factor_dims: Some(factor_dims),
            operators: 1,
            rank: None,
            seed,
            condition_cap: default_condition_cap(),
        }
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.operators == 0 {
            return bad("operators must be at least 1".into());
        }
        if !(self.condition_cap > 1.0) {
            return bad(format!("conditionCap {} must exceed 1", self.condition_cap));
        }
        match self.kind {
            GenKind::TripartiteDensity => match &self.factor_dims {
                Some(d) if d.len() == 3 && d.iter().all(|&x| x > 0) => {
                    if self.operators != 1 {
                        return bad("tripartiteDensity produces a single operator".into());
                    }
                }
                _ => return bad("tripartiteDensity needs three positive factorDims".into()),
            },
            _ => {
                let n = match self.dim {
                    Some(n) if n > 0 => n,
                    _ => return bad("dim must be a positive integer".into()),
                };
                if self.kind == GenKind::RankDeficient {
                    match self.rank {
                        Some(r) if r >= 1 && r <= n => {}
                        _ => return bad(format!("rank must lie in 1..={n}")),
                    }
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let kind = serde_json::to_value(self.kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        match &self.factor_dims {
            Some(d) if self.kind == GenKind::TripartiteDensity => {
                let dims: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                format!("{kind}-{}-s{}", dims.join("x"), self.seed)
            }
            _ => format!(
                "{kind}-n{}-L{}-s{}",
                self.dim.unwrap_or(0),
                self.operators,
                self.seed
            ),
        }
    }
}

/// Raw generated (or loaded) matrices plus their provenance.
///
/// The matrices are the authoritative data; spectral forms are derived with
/// [`Instance::chain`] or [`Instance::tripartite`].
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub label: String,
    pub seed: u64,
    pub spec: Option<GenSpec>,
    pub matrices: Vec<ComplexMatrix>,
    pub tensor_shape: Option<TensorShape>,
}

impl Instance {
    pub fn from_matrices(label: impl Into<String>, seed: u64, matrices: Vec<ComplexMatrix>) -> Self {
        Self {
            label: label.into(),
            seed,
            spec: None,
            matrices,
            tensor_shape: None,
        }
    }

    pub fn chain(&self) -> Result<ChainInstance> {
        let ops = self
            .matrices
            .iter()
            .map(PsdOperator::new)
            .collect::<Result<Vec<_>>>()?;
        ChainInstance::new(ops, self.label.clone(), self.seed)
    }

    /// The single tripartite operator and its `(a, b, c)` shape.
    pub fn tripartite(&self) -> Result<(PsdOperator, TensorShape)> {
        let shape = self
            .tensor_shape
            .clone()
            .ok_or_else(|| Error::ShapeMismatch("instance has no tensorShape".into()))?;
        if self.matrices.len() != 1 || shape.num_factors() != 3 {
            return Err(Error::ShapeMismatch(
                "tripartite instance needs one operator and three factors".into(),
            ));
        }
        if self.matrices[0].nrows() != shape.dim() {
            return Err(Error::ShapeMismatch(format!(
                "operator dim {} does not match tensorShape product {}",
                self.matrices[0].nrows(),
                shape.dim()
            )));
        }
        Ok((PsdOperator::new(&self.matrices[0])?, shape))
    }
}

/// Deterministic generation from a spec: the same spec gives the same bits.
pub fn generate(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = rng_from_seed(spec.seed);
    let mut tensor_shape = None;
    let matrices: Vec<ComplexMatrix> = match spec.kind {
        GenKind::Psd => {
            let n = spec.dim.unwrap_or_default();
            (0..spec.operators).map(|_| random_psd(&mut rng, n)).collect()
        }
        GenKind::Pd => {
            let n = spec.dim.unwrap_or_default();
            (0..spec.operators)
                .map(|_| cap_condition(random_psd(&mut rng, n), spec.condition_cap))
                .collect::<Result<_>>()?
        }
        GenKind::Density => {
            let n = spec.dim.unwrap_or_default();
            (0..spec.operators)
                .map(|_| normalize_trace(random_psd(&mut rng, n)))
                .collect()
        }
        GenKind::RankDeficient => {
            let n = spec.dim.unwrap_or_default();
            let r = spec.rank.unwrap_or(1);
            (0..spec.operators)
                .map(|_| random_psd_rank(&mut rng, n, r))
                .collect()
        }
        GenKind::CommutingFamily => {
            let n = spec.dim.unwrap_or_default();
            let basis = random_unitary(&mut rng, n);
            let hi = spec.condition_cap.ln().min(4.0);
            (0..spec.operators)
                .map(|_| {
                    let mut ops = ComplexMatrix::zeros(n, n);
                    for k in 0..n {
                        let v: f64 = rand::Rng::random_range(&mut rng, 0.0..hi);
                        let col = basis.column(k);
                        ops += col * col.adjoint() * c64(v.exp(), 0.0);
                    }
                    hermitian_part(&ops)
                })
                .collect()
        }
        GenKind::TripartiteDensity => {
            let dims = spec.factor_dims.clone().unwrap_or_default();
            let shape = TensorShape::new(dims)?;
            let m = normalize_trace(random_psd(&mut rng, shape.dim()));
            tensor_shape = Some(shape);
            vec![m]
        }
    };
    Ok(Instance {
        label: spec.label(),
        seed: spec.seed,
        spec: Some(spec.clone()),
        matrices,
        tensor_shape,
    })
}

fn normalize_trace(m: ComplexMatrix) -> ComplexMatrix {
    let t = trace(&m).re;
    hermitian_part(&(m / c64(t, 0.0)))
}

/// Adds `s·I` with the smallest `s >= 0` such that `λ_max/λ_min <= cap`.
fn cap_condition(m: ComplexMatrix, cap: f64) -> Result<ComplexMatrix> {
    let (values, _) = hermitian_eigen(&m)?;
    let lmax = values[0];
    let lmin = values[values.len() - 1].max(0.0);
    let mut shift = ((lmax - cap * lmin) / (cap - 1.0)).max(0.0);
    if shift > 0.0 {
        // a hair extra so rounding cannot push the ratio above the cap
        shift *= 1.0 + 1e-9;
    }
    Ok(hermitian_part(&(m + identity(values.len()) * c64(shift, 0.0))))
}
