use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("modulus {value} exceeds the arithmetic bound {bound}")]
    ArithmeticBound { value: u128, bound: u64 },

    #[error("group order {order} exceeds the brute-force limit {limit}")]
    BruteForceLimit { order: u64, limit: u64 },

    #[error("value {value} out of range 0..{bound}")]
    OutOfRange { value: u64, bound: u64 },

    #[error("input is not abelian")]
    NotAbelian,

    /// A structural claim failed on concrete data. Not recoverable.
    #[error("falsified: {0}")]
    Falsified(String),
}

pub type Result<T> = std::result::Result<T, Error>;
