use thiserror::Error;

/// Error type shared by every module of the crate.
///
/// The variants partition failures the same way the command line reports
/// them: parse errors, validation/precondition errors, resource-budget
/// errors, and internal invariant violations that should never occur on
/// valid input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("elements belong to different generator universes")]
    DomainMismatch,

    #[error("resource limit exceeded: {what} (limit {limit})")]
    Resource { what: String, limit: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("classification mismatch: {0}")]
    ClassificationMismatch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn resource(what: impl Into<String>, limit: usize) -> Self {
        Error::Resource { what: what.into(), limit }
    }

    /// Process exit code for the CLI: 2 parse, 3 validation, 4 resource,
    /// 5 internal invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Validation(_) | Error::Precondition(_) | Error::DomainMismatch => 3,
            Error::Resource { .. } => 4,
            Error::Internal(_) | Error::ClassificationMismatch(_) => 5,
            Error::Io(_) | Error::Json(_) => 2,
        }
    }
}
