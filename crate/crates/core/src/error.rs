use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("instance too large: {what} is {size}, cap is {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("base invariant `{name}` failed: {reason}")]
    Oracle { name: String, reason: String },

    #[error("retry budget of {0} attempts exhausted")]
    RetriesExhausted(usize),

    #[error("certificate rejected: {0}")]
    Rejected(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::TooLarge { what, size, cap })
    } else {
        Ok(())
    }
}
