use std::fmt;

use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can surface. Each variant maps onto one stable
/// [`ErrorCode`], which in turn fixes the CLI exit code and HTTP status.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at {locus}: {message}")]
    Parse { locus: String, message: String },

    #[error("schema error at {locus}: {message}")]
    Schema { locus: String, message: String },

    #[error("model failed validation: {0}")]
    Validation(ValidationReport),

    #[error("directed cycle through {}", .0.join(" -> "))]
    Cycle(Vec<String>),

    #[error("unknown variable '{0}'")]
    UnknownVariable(String),

    #[error("unknown state '{state}' for variable '{variable}'")]
    UnknownState { variable: String, state: String },

    #[error("evidence has probability zero under the model")]
    ImpossibleEvidence,

    #[error("degenerate baseline: {0}")]
    DegenerateBaseline(String),

    #[error("size limit exceeded: {what} needs {needed} cells, limit is {limit}")]
    SizeLimit {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("{0}")]
    Argument(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn schema(locus: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            locus: locus.into(),
            message: message.into(),
        }
    }

    pub fn code(&self) -> ErrorCode {
        match self {
            Error::Parse { .. } => ErrorCode::ParseError,
            Error::Schema { .. } => ErrorCode::SchemaError,
            Error::Validation(_) | Error::Cycle(_) => ErrorCode::ValidationError,
            Error::UnknownVariable(_) | Error::UnknownState { .. } => ErrorCode::UnknownSymbol,
            Error::ImpossibleEvidence => ErrorCode::ImpossibleEvidence,
            Error::DegenerateBaseline(_) => ErrorCode::DegenerateBaseline,
            Error::SizeLimit { .. } => ErrorCode::SizeLimit,
            Error::Argument(_) | Error::Io { .. } => ErrorCode::UsageError,
        }
    }

    /// Where the problem is, when there is a sensible answer.
    pub fn locus(&self) -> String {
        match self {
            Error::Parse { locus, .. } | Error::Schema { locus, .. } => locus.clone(),
            Error::Validation(report) => report
                .violations
                .first()
                .map(|v| v.locus.clone())
                .unwrap_or_default(),
            Error::Cycle(names) => names.join(","),
            Error::UnknownVariable(v) => v.clone(),
            Error::UnknownState { variable, state } => format!("{variable}={state}"),
            Error::Io { path, .. } => path.clone(),
            _ => String::new(),
        }
    }
}

/// Closed set of machine-readable error codes shared by the CLI, the HTTP
/// service and the C interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorCode {
    ParseError,
    SchemaError,
    ValidationError,
    UnknownSymbol,
    ImpossibleEvidence,
    DegenerateBaseline,
    SizeLimit,
    UsageError,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::ParseError => "parse_error",
            ErrorCode::SchemaError => "schema_error",
            ErrorCode::ValidationError => "validation_error",
            ErrorCode::UnknownSymbol => "unknown_symbol",
            ErrorCode::ImpossibleEvidence => "impossible_evidence",
            ErrorCode::DegenerateBaseline => "degenerate_baseline",
            ErrorCode::SizeLimit => "size_limit",
            ErrorCode::UsageError => "usage_error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCode::UsageError => 1,
            ErrorCode::ParseError
            | ErrorCode::SchemaError
            | ErrorCode::ValidationError
            | ErrorCode::UnknownSymbol => 2,
            ErrorCode::ImpossibleEvidence | ErrorCode::DegenerateBaseline => 3,
            ErrorCode::SizeLimit => 4,
        }
    }

    pub fn http_status(self) -> u16 {
        match self {
            ErrorCode::ImpossibleEvidence | ErrorCode::DegenerateBaseline => 422,
            ErrorCode::SizeLimit => 413,
            _ => 400,
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
