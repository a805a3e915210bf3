use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CorrdynError {
    #[error("root finder did not converge after {iterations} iterations (max residual {max_residual:e})")]
    RootFinding {
        iterations: usize,
        max_residual: f64,
        residuals: Vec<f64>,
    },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("field extension required: {0}")]
    ExtensionRequired(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("wrong coefficient kind for place: {0}")]
    WrongPlace(String),
}

impl CorrdynError {
    /// True for failures caused by a configured budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, CorrdynError::BudgetExceeded(_))
    }
}

pub type Result<T> = std::result::Result<T, CorrdynError>;
