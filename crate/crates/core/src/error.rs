use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An element or subgroup was used outside the group it must belong to.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation would have to enumerate more elements than allowed.
    #[error("resource bound exceeded: {what} needs {needed} elements but the bound is {bound}")]
    Resource {
        what: String,
        needed: String,
        bound: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),

    #[error("chain validation failed at level {level}: {reason}")]
    ChainValidation { level: usize, reason: String },

    #[error("sequence validation failed at map {index}: {reason}")]
    SequenceValidation { index: usize, reason: String },

    /// Malformed or inconsistent input files.
    #[error("spec error: {0}")]
    Spec(String),

    /// A computed object failed one of its own invariants.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn resource(what: impl Into<String>, needed: impl ToString, bound: usize) -> Self {
        Error::Resource {
            what: what.into(),
            needed: needed.to_string(),
            bound,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource { .. } => 3,
            Error::Invariant(_) => 4,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Spec(format!("line {} column {}: {}", err.line(), err.column(), err))
    }
}
