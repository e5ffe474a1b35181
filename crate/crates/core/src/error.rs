use thiserror::Error;

/// Errors raised by the engine.
///
/// Every failure is either a resource cap being hit or a caller handing an
/// operation arguments outside its domain; nothing is approximated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
