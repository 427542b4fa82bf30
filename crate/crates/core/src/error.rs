//! Error type shared by every module in the crate.

use crate::index_set::IndexSet;
use crate::linalg::InvertibilityVerdict;

/// Everything that can go wrong across matrix construction, linear algebra,
/// classification, reconstruction and the SIS certificates.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A matrix operation needed a square matrix.
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },

    /// Two operands disagree in shape.
    #[error("dimension mismatch: {left} vs {right} ({context})")]
    DimensionMismatch {
        left: String,
        right: String,
        context: &'static str,
    },

    /// A size cap guarding an exponential enumeration was exceeded.
    #[error("size {n} exceeds the configured limit {max} for {what}")]
    SizeLimit {
        n: usize,
        max: usize,
        what: &'static str,
    },

    /// An index set member is out of range for its ambient dimension.
    #[error("index {index} out of range for ambient size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    /// The operation requires a nonempty index set.
    #[error("index set must be nonempty")]
    EmptyIndexSet,

    /// A configuration value is outside its documented range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An argument value is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A matrix entry or sample was NaN or infinite.
    #[error("non-finite value at {context}")]
    NonFinite { context: String },

    /// A linear system's coefficient matrix failed the invertibility check.
    #[error("singular system: |det| = {} <= bound {}", .verdict.abs_det, .verdict.error_bound)]
    SingularSystem { verdict: InvertibilityVerdict },

    /// Recovery from mixed samples is impossible for this subset.
    #[error("recovery impossible: weaving operator is singular at J = {witness}")]
    RecoveryImpossible { witness: IndexSet },

    /// A computed solution failed its residual acceptance test.
    #[error("residual check failed: {residual:.3e} > {allowed:.3e}")]
    ResidualCheck { residual: f64, allowed: f64 },

    /// A matrix expected to be Hermitian was not, within tolerance.
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {allowed:.3e}")]
    NotHermitian { defect: f64, allowed: f64 },

    /// Spectrum grids of two operands are incompatible.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A spectrum violates a support restriction required by the operation.
    #[error("support violation: {0}")]
    SupportViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
