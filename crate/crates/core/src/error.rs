use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mesh input: {0}")]
    InvalidMesh(String),

    #[error("unsupported polynomial degree {0} (supported: 1, 2, 3)")]
    UnsupportedDegree(usize),

    #[error("unsupported quadrature exactness {0} (supported: up to 10)")]
    UnsupportedQuadrature(usize),

    #[error("triplet ({row}, {col}) out of range for a {n_rows}x{n_cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{system}: factorization broke down at pivot {pivot} (singular to working precision)")]
    SingularMatrix { system: String, pivot: usize },

    #[error("{system}: solve did not reach the residual target (relative residual {residual:e})")]
    SolveFailed { system: String, residual: f64 },

    #[error("invalid model parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid time stepping configuration: {0}")]
    InvalidConfig(String),

    #[error("time level {level}: {source}")]
    AtLevel {
        level: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_level(self, level: usize) -> Self {
        Error::AtLevel {
            level,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
