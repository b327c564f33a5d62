use thiserror::Error;

/// Everything that can go wrong across the engine. Internal variants signal
/// engine bugs, never bad user input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("inverse of zero in F_p")]
    ZeroInverse,
    #[error("not an odd prime below 2^31: {0}")]
    BadCharacteristic(u64),
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("ideal contains a unit; the zero ring is excluded")]
    UnitIdeal,
    #[error("unknown monomial order: {0}")]
    BadOrder(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("operands live over different rings")]
    RingMismatch,
    #[error("dualizer is not certified semidualizing up to the requested bound")]
    UncertifiedDualizer,
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("Auslander-Buchsbaum cross-check failed (engine bug): {0}")]
    ABViolation(String),
    #[error("operation requires a nonzero module")]
    ZeroModule,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated (engine bug): {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
