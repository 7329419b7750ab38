use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("singular linear system")]
    SingularSystem,

    #[error("{value} is not a perfect cube")]
    NotACube { value: i64 },

    #[error("bound too large: {name}={value} exceeds {limit}")]
    BoundTooLarge {
        name: &'static str,
        value: i64,
        limit: i64,
    },

    #[error("malformed tables file: {0}")]
    Tables(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("empty report")]
    EmptyReport,

    /// A derivation that is expected to hold failed on the loaded data.
    #[error("inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
