use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A caller-supplied argument failed validation.
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    /// An operation outside its mathematical domain, e.g. inverting zero.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two operands live over different coefficient fields.
    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    /// Two independent routes to the same quantity disagreed.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors that signal a failed cross-check rather than bad input.
    pub fn is_inconsistency(&self) -> bool {
        matches!(self, Error::Inconsistency(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
