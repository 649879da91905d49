use thiserror::Error;

/// Errors surfaced by the evaluation and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported moment order {0} (supported: 0..=12)")]
    UnsupportedOrder(u32),

    #[error("wrong tail: {0}")]
    WrongTail(String),

    #[error("argument outside the bulk: {0}")]
    OutOfBulk(String),

    #[error("sample size below theorem threshold: left side {left} > right side {right}")]
    Threshold { left: f64, right: f64 },

    #[error("oracle evaluation failed: {0}")]
    Oracle(String),

    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
