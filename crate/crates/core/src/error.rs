//! Error type shared by all verification kernels.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),

    #[error("{value} is not invertible modulo {modulus}")]
    NonInvertible { value: u64, modulus: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("complete-sum and divisor-formula evaluations disagree: {complete} vs {divisor}")]
    InternalMismatch { complete: f64, divisor: i64 },

    #[error("no admissible moduli: {0}")]
    EmptySet(String),

    #[error("delta must be positive, got {0}")]
    InvalidDelta(f64),

    #[error("coefficients up to {needed} requested but only {available} are loaded")]
    CoefficientRangeExceeded { needed: u64, available: u64 },

    #[error("Bessel order {0} exceeds the supported maximum of 64")]
    UnsupportedOrder(u32),

    #[error("argument {0} is below the envelope domain x >= 1")]
    DomainTooSmall(f64),

    #[error("quadrature failed to converge: {0}")]
    QuadratureNonConvergent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("coefficient cache is malformed: {0}")]
    CacheFormat(String),
}
