use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The function did not change sign on the scanned interval.
    #[error("no sign change of {what} on [{lo}, {hi}]")]
    Bracket {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("bisection did not reach tolerance {tol} within {max_iter} iterations")]
    NoConvergence { tol: f64, max_iter: usize },
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
