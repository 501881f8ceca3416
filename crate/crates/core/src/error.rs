use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the series, array, path and transform routines.
///
/// Messages are prefixed with the module that raised them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series: constant term is zero")]
    ZeroConstantTerm,
    #[error("series: inner series of a composition must have zero constant term")]
    NonzeroConstantTerm,
    #[error("series: not reversible, need f(0) = 0 and f'(0) != 0")]
    NotReversible,
    #[error("series: {0} is not the square of a rational")]
    NotASquare(String),
    #[error("series: fixed-point equation is not contractive ({0})")]
    NotContractive(String),
    #[error("series: index {index} is beyond the known order {order}")]
    OrderExceeded { index: usize, order: usize },
    #[error("series: a coefficient exceeds {0} bits")]
    CoefficientTooLarge(u64),
    #[error("series: unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("riordan: invalid array, {0}")]
    InvalidArray(String),
    #[error("riordan: entry ({n},{k}) = {value} is not an integer")]
    NonIntegralEntry { n: usize, k: usize, value: String },
    #[error("riordan: f2 = 0, the triangulated rectification is not a Riordan array")]
    F2Zero,
    #[error("riordan: beta_0 must be nonzero")]
    Beta0Zero,
    #[error("characterization: zero pivot on diagonal {0}")]
    SingularMatrix(usize),
    #[error("characterization: a_00 must be nonzero")]
    ZeroLeadingCoefficient,
    #[error("paths: no potential with |alpha|,|beta| <= {0}, path counts may be infinite")]
    NoPotential(i64),
    #[error("paths: invalid step specification, {0}")]
    InvalidSteps(String),
    #[error("transforms: need at least {needed} terms, got {got}")]
    InsufficientTerms { needed: usize, got: usize },
    #[error("transforms: continued fraction tail still affects coefficient {0}")]
    InsufficientDepth(usize),
    #[error("transforms: Hankel determinant of size {0} vanishes")]
    ZeroHankel(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
