use thiserror::Error;

/// Everything that can go wrong across the library.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type so
/// the error stays non-generic.
#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("not a unit imaginary quaternion (re = {re:e}, |q| = {norm:e})")]
    NotUnitImaginary { re: f64, norm: f64 },

    #[error("value at index {index} is not in the slice C_m (off-slice mass {mass:e})")]
    NotInSlice { index: usize, mass: f64 },

    #[error("rank deficiency at vector {index} (residual norm {residual:e})")]
    RankDeficient { index: usize, residual: f64 },

    #[error("incomplete basis: {size} vectors for dimension {dim}")]
    IncompleteBasis { size: usize, dim: usize },

    #[error("operator is not normal: ||A*A - AA*||_F = {commutator:e}")]
    NotNormal { commutator: f64 },

    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("eigenvalue pairing failure: {found} lifted vectors for dimension {expected}")]
    PairingFailure { found: usize, expected: usize },

    #[error("operator does not commute with J: ||AJ - JA||_F = {commutator:e}")]
    NotCommuting { commutator: f64 },

    #[error("measure spaces differ")]
    SpaceMismatch,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("symbol vanishes at positive-weight atom {index}")]
    ZeroSymbol { index: usize },

    #[error("bounded transform is not invertible: ||Z|| = {norm}")]
    NotInvertible { norm: f64 },

    #[error("symbol is not injective: atoms {first} and {second} share the image")]
    NonInjective { first: usize, second: usize },

    #[error("bounded symbol leaves the open unit disc at atom {index} (|phi| = {modulus})")]
    OutsideUnitDisc { index: usize, modulus: f64 },

    #[error("{name}: residual {residual:e} exceeds tolerance {tol:e}")]
    InvariantViolated { name: String, residual: f64, tol: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = SpectraError> = std::result::Result<T, E>;
