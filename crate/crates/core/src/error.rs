//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: {cost} cases exceed the enumeration budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        cost: u128,
        budget: u64,
    },

    #[error("{what}: no valid construction after {attempts} attempts")]
    RetryCapExceeded { what: &'static str, attempts: usize },

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("pivot {0} is not an admissible element")]
    InvalidPivot(usize),

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("universe of {n} elements exceeds the supported maximum of {max}")]
    UniverseTooLarge { n: usize, max: usize },

    #[error("invalid instance: {}", .0.join("; "))]
    InvalidInstance(Vec<String>),

    #[error("instance kind mismatch: {0}")]
    KindMismatch(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for the errors that mean "the instance is too large for the
    /// configured limits" rather than "the input is wrong".
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::RetryCapExceeded { .. }
        )
    }
}
