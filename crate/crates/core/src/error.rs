use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero has no prime factorization")]
    ZeroInput,

    #[error("denominator must be positive")]
    ZeroDenominator,

    #[error("{what}: {count} exceeds the configured cap of {cap}")]
    ResourceCap {
        what: &'static str,
        count: String,
        cap: u64,
    },

    #[error("power base must be positive, got {0}")]
    NonPositiveBase(String),

    #[error("rounded |n^upper| is zero; the ratio has no denominator")]
    DegenerateDenominator,

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("invalid precision: {0}")]
    InvalidPrecision(String),

    #[error("{0}")]
    OutOfDomain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors raised by a resource cap rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::ResourceCap { .. })
    }
}
