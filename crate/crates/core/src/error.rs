use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension {0} outside 1..=64")]
    DimensionOutOfRange(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |A - A^H| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("Jacobi sweeps did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix has negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} outside 0..{len}")]
    Index { index: usize, len: usize },

    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch {
        left: crate::qstates::BasisTag,
        right: crate::qstates::BasisTag,
    },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("invalid POM: {0}")]
    InvalidPom(String),

    #[error("{0} copies requested, at most {max} supported", max = crate::qstates::MAX_COPIES)]
    TooManyCopies(usize),
}
