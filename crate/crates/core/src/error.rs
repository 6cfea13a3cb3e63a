use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{what} did not converge after {iterations} iterations (best estimate {estimate:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        estimate: f64,
    },

    #[error("matrix is singular to working precision (pivot column {column})")]
    Singular { column: usize },

    #[error("derivative of order {requested} requested, function provides up to {available}")]
    DerivativeOrder { requested: usize, available: usize },

    #[error("divided-difference coefficient {index} has magnitude {magnitude:e}, exceeding the growth limit")]
    CoefficientGrowth { index: usize, magnitude: f64 },

    #[error("matrix is not normal: commutator defect {defect:e} exceeds tolerance {tolerance:e}")]
    NotNormal { defect: f64, tolerance: f64 },

    #[error("method {method} requires the spectral norm, got {norm}")]
    NormNotSupported { method: &'static str, norm: String },

    #[error("method {method} requires f = exp")]
    FunctionNotSupported { method: &'static str },

    #[error("too many points for the quadrature oracle: {0} (at most 5)")]
    TooManyPoints(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("I/O error: {0}")]
    Io(String),

    #[error("experiment aborted: {invalid} of {total} trials invalid")]
    TooManyInvalidTrials { invalid: usize, total: usize },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Usage and I/O problems as opposed to numerical failures.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Io(_)
                | Error::Parse { .. }
                | Error::InvalidArgument(_)
                | Error::DimensionMismatch { .. }
                | Error::NotSquare { .. }
                | Error::EmptyDimension
                | Error::NormNotSupported { .. }
                | Error::FunctionNotSupported { .. }
        )
    }
}
