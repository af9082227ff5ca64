use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("invalid codeword: block value {value} exceeds {limit}")]
    InvalidCodeword { value: u64, limit: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("framing error: {0}")]
    Framing(String),
    #[error("radix mismatch: expected {expected}, got {got}")]
    RadixMismatch { expected: u8, got: u8 },
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
