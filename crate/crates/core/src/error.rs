use thiserror::Error;

/// Errors raised by the lab modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("parameter `{name}` out of domain: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("quadrature did not converge after {nodes} nodes (last change {last_change:.3e})")]
    NonConvergence { nodes: usize, last_change: f64 },

    #[error("work budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{0} is outside the covered range")]
    OutOfRange(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("config: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(err: std::io::Error) -> Self {
        LabError::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> LabError {
    LabError::Domain {
        name,
        reason: reason.into(),
    }
}
