use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not unitary (|UU^dagger - I|_F = {0:e})")]
    NotUnitary(f64),
    #[error("matrix is not Hermitian (|A - A^dagger|_F = {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not a density matrix: {0}")]
    NotDensity(String),
    #[error("rotation axis is not a unit vector (norm {0})")]
    NonUnitAxis(f64),
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("game is not zero-sum: u1 + u2 = {0:e} at some profile")]
    NotZeroSum(f64),
    #[error("malformed game structure: {0}")]
    Structure(String),
    #[error("unknown player {0}")]
    UnknownPlayer(u8),
    #[error("view {0} is not relevant in this family")]
    IrrelevantView(String),
    #[error("game too large: {0}")]
    TooLarge(String),
    #[error("gate expression error at offset {offset}: {message}")]
    GateSyntax { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
