use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{basis} is not a basis element of {space}")]
    NotInAmbient { basis: String, space: String },
    #[error("ambient mismatch: {left} vs {right}")]
    AmbientMismatch { left: String, right: String },
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("target is not in the span of the basis")]
    NotInSpan,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
