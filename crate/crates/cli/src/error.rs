//! CLI error type with the exit-code contract: 2 invalid config, 3 cost
//! guard, 4 internal invariant failure.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable inputs, violated preconditions.
    Invalid(String),
    /// A computation refused to start or aborted because it would be too
    /// expensive (explosion guards, enumeration budgets, size overflows).
    CostGuard(String),
    /// Should-not-happen conditions.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::CostGuard(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid configuration: {}", m),
            CliError::CostGuard(m) => write!(f, "cost guard: {}", m),
            CliError::Internal(m) => write!(f, "internal error: {}", m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hdnet_core::Error> for CliError {
    fn from(e: hdnet_core::Error) -> Self {
        use hdnet_core::Error::*;
        match e {
            ExplosionGuard { .. } | BudgetTooLarge { .. } | BudgetExhausted { .. }
            | SizeOverflow { .. } => CliError::CostGuard(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(format!("i/o: {}", e))
    }
}

pub type CliResult<T> = Result<T, CliError>;
