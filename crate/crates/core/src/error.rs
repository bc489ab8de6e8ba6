use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// `InternalConsistency` is reserved for outcomes that contradict a proven
/// property of the constructions (a bug, not bad input); the CLI maps it to
/// its own exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("operands live in different fields")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("multiplicative order unavailable: {0}")]
    OrderUnavailable(String),
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: String,
        budget: u64,
    },
    #[error("no success after {trials} trials")]
    TrialsExhausted { trials: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),
}

impl Error {
    /// Stable token naming the failure category.
    pub fn category(&self) -> &'static str {
        match self {
            Error::NotPrime(_) | Error::InvalidModulus(_) | Error::Precondition(_) => "invalid-input",
            Error::ContextMismatch | Error::DivisionByZero => "arithmetic",
            Error::OrderUnavailable(_) => "order-unavailable",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::TrialsExhausted { .. } => "trials-exhausted",
            Error::Parse(_) => "parse",
            Error::InternalConsistency(_) => "internal-consistency",
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::InternalConsistency(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
