use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed diagram: {0}")]
    Structure(String),

    #[error("diagram is disconnected")]
    Disconnected,

    #[error("degree {degree} exceeds the configured bound {bound}")]
    Capacity { degree: usize, bound: usize },

    #[error("{0} is not in the ambient basis")]
    OutsideBasis(String),

    #[error("invalid skeleton data: {0}")]
    Skeleton(String),

    #[error("invalid grope encoding: {0}")]
    Grope(String),

    #[error("invalid tower encoding: {0}")]
    Tower(String),

    #[error("grope class {class} is below the requested degree {degree}")]
    ClassViolation { class: usize, degree: usize },

    #[error("points of mixed order: expected {expected}, found {found}")]
    MixedOrder { expected: usize, found: usize },

    #[error("syntax error at line {line}, column {column} (offset {offset}): {message}")]
    Syntax { offset: usize, line: usize, column: usize, message: String },

    #[error("{0}")]
    Format(String),
}
