use thiserror::Error;

/// Errors raised by the numerical layers and the instance/report codecs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max entry asymmetry {0:e})")]
    NonHermitian(f64),

    #[error("negative eigenvalue {value:e} below tolerance {tolerance:e}")]
    NegativeSpectrum { value: f64, tolerance: f64 },

    #[error("Hermitian eigensolver did not converge")]
    EigensolverFailure,

    #[error("singular value decomposition did not converge")]
    SvdFailure,

    #[error("invalid Schatten exponent {0} (need p >= 1 or p = inf)")]
    InvalidExponent(f64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("swivel block {index} is not unitary (residual {residual:e})")]
    NonUnitaryBlock { index: usize, residual: f64 },

    #[error("swivel assignment does not match the chain: {0}")]
    StructureMismatch(String),

    #[error("operator {operator} has a commutant block of size {size}; phase grid needs scalar blocks")]
    NonScalarCommutant { operator: usize, size: usize },

    #[error("phase grid needs {points} evaluations, budget is {budget}")]
    GridTooLarge { points: u128, budget: u128 },

    #[error("swivel does not commute with the marginal (residual {0:e})")]
    CommutationViolation(f64),

    #[error("parameter out of domain: {0}")]
    DomainError(String),

    #[error("integrand q-norm underflow at t = {t} (value {value:e})")]
    IntegrandUnderflow { t: f64, value: f64 },

    #[error("operator {0} is rank deficient; positive definite input required")]
    RankDeficient(usize),

    #[error("invalid generation spec: {0}")]
    InvalidSpec(String),

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("schema version {found} not supported (expected {expected})")]
    SchemaVersionMismatch { found: u32, expected: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}
