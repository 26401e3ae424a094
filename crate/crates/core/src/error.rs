use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Hurst index must lie in (0, 1), got {0}")]
    InvalidHurst(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("insufficient data: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("grid size {n} exceeds the sampler capacity {cap}")]
    Capacity { n: usize, cap: usize },

    #[error("covariance matrix is not positive definite at pivot {pivot} (value {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("circulant embedding has negative eigenvalue {eigenvalue:e} at index {index} (max {max:e})")]
    EmbeddingFailure { index: usize, eigenvalue: f64, max: f64 },

    #[error("unknown field `{0}`")]
    UnknownField(String),

    #[error("field `{field}` fails validation for partial ({a},{b}) at ({x}, {y}): discrepancy {discrepancy:e}")]
    FieldValidation {
        field: String,
        a: u32,
        b: u32,
        x: f64,
        y: f64,
        discrepancy: f64,
    },

    #[error("series did not converge: {0}")]
    NotConverged(String),

    #[error("unsupported limit law: {0}")]
    UnsupportedLaw(String),

    #[error("correlation is undefined for constant samples")]
    UndefinedCorrelation,

    #[error("non-finite value produced by {0}")]
    NonFinite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
