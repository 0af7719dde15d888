//! JSON documents for instances and verification reports, and CSV curves.
//!
//! Every number that has to survive a round trip is stored as a hex-float
//! string; decimal copies sit next to them for people reading the file and
//! are ignored on load. Matrices are row-major arrays of `[re, im]` pairs.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::hexfloat;
use super::{GenKind, GenSpec, Instance};
use crate::error::{Error, Result};
use crate::interp::QuadratureConfig;
use crate::matcore::{c64, symmetrize, trace, ComplexMatrix, PsdOperator, TensorShape};
use crate::report::{Diagnostics, Inequality, Status, VerificationReport};
use crate::swivelopt::OptimizerConfig;
use crate::tolerances::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;

const TENSOR_LAYOUT: &str = "row-major entries; tensor factor 0 (A) is the slowest index";
const DENSITY_TRACE_TOL: f64 = 1e-9;

pub fn tool_version() -> String {
    format!("swivel {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    /// `[re, im]` hex floats, row-major. Authoritative.
    pub entries: Vec<[String; 2]>,
    /// Decimal shadow of `entries`; not read back.
    #[serde(default)]
    pub decimal: Vec<[f64; 2]>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.len());
        let mut decimal = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push([hexfloat::encode(z.re), hexfloat::encode(z.im)]);
                decimal.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
            decimal,
        }
    }

    /// `context` prefixes field paths in error messages, e.g. `operators[0]`.
    pub fn to_matrix(&self, context: &str) -> Result<ComplexMatrix> {
        if self.rows * self.cols != self.entries.len() {
            return Err(Error::parse(
                format!("{context}.entries"),
                format!("{} entries for a {}x{} matrix", self.entries.len(), self.rows, self.cols),
            ));
        }
        let mut m = ComplexMatrix::zeros(self.rows, self.cols);
        for (k, [re, im]) in self.entries.iter().enumerate() {
            let part = |s: &str, idx: usize| {
                hexfloat::decode(s).map_err(|e| Error::parse(format!("{context}.entries[{k}][{idx}]"), e))
            };
            m[(k / self.cols, k % self.cols)] = c64(part(re, 0)?, part(im, 1)?);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum InstanceKind {
    Chain,
    Tripartite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InstanceDoc {
    pub schema_version: u32,
    pub kind: InstanceKind,
    pub label: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<GenSpec>,
    pub tensor_layout: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor_shape: Option<TensorShape>,
    pub operators: Vec<MatrixDoc>,
}

impl InstanceDoc {
    pub fn from_instance(inst: &Instance) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind: if inst.tensor_shape.is_some() {
                InstanceKind::Tripartite
            } else {
                InstanceKind::Chain
            },
            label: inst.label.clone(),
            seed: inst.seed,
            spec: inst.spec.clone(),
            tensor_layout: TENSOR_LAYOUT.into(),
            tensor_shape: inst.tensor_shape.clone(),
            operators: inst.matrices.iter().map(MatrixDoc::from_matrix).collect(),
        }
    }

    /// Decodes and validates: square Hermitian PSD operators of one
    /// dimension, a matching tensor shape, unit trace for density kinds.
    pub fn to_instance(&self) -> Result<Instance> {
        check_version(self.schema_version)?;
        if self.operators.is_empty() {
            return Err(Error::parse("operators", "no operators"));
        }
        let is_density = matches!(
            self.spec.as_ref().map(|s| s.kind),
            Some(GenKind::Density | GenKind::TripartiteDensity)
        );
        let mut matrices = Vec::with_capacity(self.operators.len());
        for (i, doc) in self.operators.iter().enumerate() {
            let ctx = format!("operators[{i}]");
            let m = doc.to_matrix(&ctx)?;
            if m.nrows() != m.ncols() {
                return Err(Error::parse(ctx, format!("{}x{} operator is not square", m.nrows(), m.ncols())));
            }
            if m.nrows() != self.operators[0].rows {
                return Err(Error::parse(ctx, format!("dim {} differs from operators[0]", m.nrows())));
            }
            if is_density {
                let tr = trace(&m).re;
                if (tr - 1.0).abs() > DENSITY_TRACE_TOL {
                    return Err(Error::parse(ctx.clone(), format!("density trace {tr} (expected 1)")));
                }
            }
            symmetrize(&m).map_err(|e| Error::parse(ctx.clone(), e.to_string()))?;
            PsdOperator::new(&m).map_err(|e| Error::parse(ctx.clone(), e.to_string()))?;
            matrices.push(m);
        }
        match (self.kind, &self.tensor_shape) {
            (InstanceKind::Tripartite, Some(shape)) => {
                if shape.dim() != matrices[0].nrows() || shape.num_factors() != 3 || matrices.len() != 1 {
                    return Err(Error::parse(
                        "tensorShape",
                        format!(
                            "{:?} does not describe one operator of dim {}",
                            shape.factor_dims(),
                            matrices[0].nrows()
                        ),
                    ));
                }
            }
            (InstanceKind::Tripartite, None) => return Err(Error::parse("tensorShape", "missing for tripartite kind")),
            (InstanceKind::Chain, Some(_)) => return Err(Error::parse("tensorShape", "present for chain kind")),
            (InstanceKind::Chain, None) => {}
        }
        Ok(Instance {
            label: self.label.clone(),
            seed: self.seed,
            spec: self.spec.clone(),
            matrices,
            tensor_shape: self.tensor_shape.clone(),
        })
    }
}

fn check_version(found: u32) -> Result<()> {
    if found == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(Error::SchemaVersionMismatch {
            found,
            expected: SCHEMA_VERSION,
        })
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
}

/// Reads the schema version first so an unknown version is reported as such
/// rather than as a field mismatch.
fn parse_versioned<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
    let version = value
        .get("schemaVersion")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::parse("schemaVersion", "missing or not an integer"))?;
    check_version(version as u32)?;
    serde_json::from_str(text).map_err(json_error)
}

pub fn instance_to_string(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&InstanceDoc::from_instance(inst)).expect("instance serializes");
    s.push('\n');
    s
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_versioned::<InstanceDoc>(text)?.to_instance()
}

pub fn save_instance(path: impl AsRef<Path>, inst: &Instance) -> Result<()> {
    write_atomic(path, instance_to_string(inst).as_bytes())
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&fs::read_to_string(path)?)
}

/// Writes to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidInput, "path has no file name")))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    drop(f);
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Everything needed to repeat a verification from the report alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunParameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_grid: Option<Vec<f64>>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureConfig>,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportFile {
    pub schema_version: u32,
    pub inequality: Inequality,
    pub parameters: RunParameters,
    /// Decimal copies (null when not finite).
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub lhs_hex: String,
    pub rhs_hex: String,
    pub slack_hex: String,
    pub status: Status,
    pub diagnostics: Diagnostics,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_path: Option<String>,
    pub instance: InstanceDoc,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl ReportFile {
    pub fn new(report: &VerificationReport, parameters: RunParameters, instance: &Instance, instance_path: Option<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            inequality: report.inequality,
            parameters,
            lhs: finite(report.lhs),
            rhs: finite(report.rhs),
            slack: finite(report.slack),
            lhs_hex: hexfloat::encode(report.lhs),
            rhs_hex: hexfloat::encode(report.rhs),
            slack_hex: hexfloat::encode(report.slack),
            status: report.status,
            diagnostics: report.diagnostics.clone(),
            tool_version: tool_version(),
            instance_path,
            instance: InstanceDoc::from_instance(instance),
        }
    }

    /// Exact `(lhs, rhs)` from the hex fields.
    pub fn sides(&self) -> Result<(f64, f64)> {
        let lhs = hexfloat::decode(&self.lhs_hex).map_err(|e| Error::parse("lhsHex", e))?;
        let rhs = hexfloat::decode(&self.rhs_hex).map_err(|e| Error::parse("rhsHex", e))?;
        Ok((lhs, rhs))
    }
}

pub fn save_report(path: impl AsRef<Path>, report: &ReportFile) -> Result<()> {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

pub fn load_report(path: impl AsRef<Path>) -> Result<ReportFile> {
    let rep: ReportFile = parse_versioned(&fs::read_to_string(path)?)?;
    rep.instance.to_instance()?;
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepRow {
    pub p: f64,
    pub value: f64,
    pub oracle_value: Option<f64>,
    pub restart_spread: f64,
}

/// Any serializable rows as CSV with a header, written atomically.
pub fn write_csv<T: Serialize>(path: impl AsRef<Path>, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    write_atomic(path, &bytes)
}

/// Columns `p,value,oracleValue,restartSpread`.
pub fn write_sweep_csv(path: impl AsRef<Path>, rows: &[SweepRow]) -> Result<()> {
    write_csv(path, rows)
}
