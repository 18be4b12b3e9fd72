use thiserror::Error;

/// Errors raised by the algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),
    #[error("characteristic {0} is too large (limit 2^32)")]
    CharacteristicTooLarge(u64),
    #[error("operands live in different polynomial rings")]
    AmbientMismatch,
    #[error("exponent would exceed the configured bound {bound}")]
    ExponentOverflow { bound: u64 },
    #[error("resource bound exceeded: {0}")]
    ResourceExceeded(String),
    #[error("not stabilized within level {horizon}")]
    Unstabilized { horizon: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
