use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to
/// produce an actionable message at the CLI boundary.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition {rows:?}: {reason}")]
    InvalidPartition { rows: Vec<u32>, reason: String },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("size limit exceeded: {what} = {value} (limit {limit})")]
    SizeLimit {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("parameter `{name}` out of range: {reason}")]
    OutOfRange { name: &'static str, reason: String },

    #[error("mismatched box counts: {left} vs {right}")]
    MismatchedN { left: u32, right: u32 },

    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(name: &'static str, reason: impl Into<String>) -> Error {
    Error::OutOfRange {
        name,
        reason: reason.into(),
    }
}
