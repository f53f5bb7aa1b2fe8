use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent instance data. `line` is 1-based when the
    /// error comes from parsing text.
    #[error("invalid instance{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    InvalidInstance { line: Option<usize>, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A matching was required to weakly dominate the DA outcome but does not.
    #[error("domination precondition violated: {0}")]
    Domination(String),

    /// An exhaustive search would exceed its configured budget.
    #[error("resource guard exceeded: {what} needs {required}, cap is {cap}")]
    Resource {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidInstance {
            line: None,
            message: message.into(),
        }
    }

    pub(crate) fn at_line(line: usize, message: impl Into<String>) -> Self {
        Error::InvalidInstance {
            line: Some(line),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
