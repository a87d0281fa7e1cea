use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is outside the supported range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit: {0}")]
    Resource(String),

    /// A resource error carrying the prime-table limit that would suffice.
    #[error("resource limit: need a prime table to at least {needed}, have {have}")]
    PrimeTableTooSmall { needed: u64, have: u64 },

    #[error("internal precision: {0}")]
    InternalPrecision(String),

    #[error("corrupt cache: {0}")]
    CorruptCache(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, value: u64, limit: u64) -> Self {
        Error::OutOfRange { what, value, limit }
    }
}
