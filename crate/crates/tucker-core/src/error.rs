//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by tensor algebra, factorizations, decomposition drivers
/// and the `.dten` / CSV persistence layer.
#[derive(Debug, Error)]
pub enum TuckerError {
    /// Incompatible shapes between operands (tensor/matrix dimensions).
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Invalid configuration or argument (ranks, tolerances, modes, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A matrix expected to have full column rank did not, within tolerance.
    #[error("rank-deficient matrix: {0}")]
    RankDeficient(String),

    /// A matrix required to be positive definite had an eigenvalue at or
    /// below the tolerance.
    #[error("matrix not positive definite: {0}")]
    NotPositiveDefinite(String),

    /// LAPACK eigensolver returned a nonzero info code.
    #[error("symmetric eigensolver failed (dsyevr info = {0})")]
    EigenFailure(i32),

    /// A value that must be finite was NaN or infinite.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// An iterative method produced a non-finite error value or otherwise
    /// diverged.
    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// File did not start with the `DTEN` magic bytes.
    #[error("bad magic: not a dten file")]
    BadMagic,

    /// File carried an unsupported format version.
    #[error("unsupported dten version {0}")]
    VersionMismatch(u32),

    /// File ended before the payload announced by the header.
    #[error("truncated dten payload: {0}")]
    Truncated(String),

    /// Header dims and actual payload length disagree.
    #[error("payload length mismatch: {0}")]
    LengthMismatch(String),

    /// Malformed text content (CSV trace, model directory layout, ...).
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, TuckerError>;
