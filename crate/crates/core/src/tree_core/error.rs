use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("decoration mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("unknown decoration: {0}")]
    UnknownDecoration(String),
    #[error("root of {0} is decorated")]
    DecoratedRoot(String),
    #[error("{0} is not in the image of phi")]
    NotInImage(String),
    #[error("generator is not primitive: {0}")]
    NotPrimitive(String),
    #[error("truncation exceeded: {0}")]
    TruncationExceeded(String),
    #[error("vertex {0} is adjacent to a noise edge")]
    NoiseAdjacentVertex(usize),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
