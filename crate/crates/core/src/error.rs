use thiserror::Error;

/// Errors raised by every module of the lab.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid word spec: {0}")]
    InvalidSpec(String),
    #[error("directive exhausted: {needed} symbols requested, directive determines only {available}")]
    DirectiveExhausted { needed: usize, available: usize },
    #[error("invalid algebra parameters: {0}")]
    InvalidParams(String),
    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),
    #[error("model is already unital")]
    AlreadyUnital,
    #[error("{what} cap exceeded: requested {requested}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("mode unsound: {0}")]
    ModeUnsound(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid push-down move: {0}")]
    InvalidMove(String),
    #[error("not representable: {0}")]
    NotRepresentable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant failed: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::DirectiveExhausted { .. } => "DirectiveExhausted",
            Error::InvalidParams(_) => "InvalidParams",
            Error::FlavorMismatch(_) => "FlavorMismatch",
            Error::AlreadyUnital => "AlreadyUnital",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::ModeUnsound(_) => "ModeUnsound",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::InvalidMove(_) => "InvalidMove",
            Error::NotRepresentable(_) => "NotRepresentable",
            Error::Parse(_) => "Parse",
            Error::InvariantViolation(_) => "InvariantViolation",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
