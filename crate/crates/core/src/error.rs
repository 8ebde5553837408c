use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Arguments violate an operation's preconditions.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// The request would exceed an enumeration or search cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// A parameter recipe does not yield valid parameters for these (n, q).
    #[error("recipe infeasible: {0}")]
    RecipeInfeasible(String),
    /// Malformed code file.
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
