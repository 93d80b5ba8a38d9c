use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("blocks overlap in color {0}")]
    Overlap(u8),
    #[error("empty block")]
    EmptyBlock,
    #[error("color {0} out of range")]
    ColorRange(u8),
    #[error("lower block {0} is not contained in the upper block")]
    NotContained(usize),
    #[error("rows have different lengths")]
    RowLength,
    #[error("too many blocks")]
    TooManyBlocks,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("levels {0} and {1} are not linked")]
    NotLinked(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("refused: {0}")]
    Guard(String),
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
