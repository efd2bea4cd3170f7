use thiserror::Error;

/// Errors raised by the verification kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The prime table does not reach far enough for the request.
    #[error("coverage error: need primes up to {needed}, table reaches {limit}")]
    Coverage { needed: u64, limit: u64 },

    /// A configured size or memory budget would be exceeded.
    #[error("resource error: {0}")]
    Resource(String),

    /// No prime was found strictly between `n` and `2n`.
    #[error("no prime in ({n}, {})", 2 * n)]
    PostulateViolation { n: u64 },

    /// Malformed input (decimal strings, certificate files).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
