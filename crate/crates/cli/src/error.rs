use std::fmt;

use hyperwalk::interrobang::InterroError;
use hyperwalk::numeric::NumericError;
use hyperwalk::triangle::TriangleError;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Usage,
    InvalidInput,
    InvalidConfig,
    Io,
    BudgetExhausted,
    Internal,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage | ErrorKind::InvalidInput | ErrorKind::InvalidConfig | ErrorKind::Io => 2,
            ErrorKind::BudgetExhausted => 3,
            ErrorKind::Internal => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::InvalidInput, message)
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message } })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        let kind = match e {
            NumericError::Singular => ErrorKind::Internal,
            _ => ErrorKind::InvalidInput,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<InterroError> for CliError {
    fn from(e: InterroError) -> Self {
        let kind = match &e {
            InterroError::Numeric(n) => return n.clone().into(),
            InterroError::BudgetExceeded(_) => ErrorKind::BudgetExhausted,
            InterroError::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::InvalidInput,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<TriangleError> for CliError {
    fn from(e: TriangleError) -> Self {
        let kind = match e {
            TriangleError::InvalidIndex(_) => ErrorKind::InvalidInput,
            TriangleError::DegenerateSeparation { .. } => ErrorKind::Internal,
            _ => ErrorKind::InvalidConfig,
        };
        CliError::new(kind, e.to_string())
    }
}
