use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violated an operation's precondition (domain error).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A configured resource cap would be exceeded.
    #[error("{what} = {requested} exceeds the configured cap {cap}")]
    ResourceCap {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    /// Input could not be parsed or failed structural validation.
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// Machine-readable classification used by the CLI and the Python bindings.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Precondition(_) => "precondition",
            Error::ResourceCap { .. } => "resource_cap",
            Error::Malformed(_) => "malformed",
        }
    }

    pub(crate) fn cap(what: &'static str, requested: usize, cap: usize) -> Self {
        Error::ResourceCap {
            what,
            requested,
            cap,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
