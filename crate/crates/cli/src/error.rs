use std::process::ExitCode;

use thiserror::Error;
use walker_env_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Core(CoreError),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::BudgetExceeded { .. } => Self::Budget(e.to_string()),
            CoreError::InvariantViolation(_) | CoreError::Contradiction { .. } => Self::Invariant(e.to_string()),
            CoreError::InfeasibleConditioning { .. }
            | CoreError::InvalidParameter(_)
            | CoreError::Shape(_)
            | CoreError::Dimension(_)
            | CoreError::UnsupportedDimension(_) => Self::Config(e.to_string()),
            other => Self::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Invariant(_) => 3,
            Self::Budget(_) => 4,
            Self::Io(_) | Self::Core(_) => 1,
        }
    }

    pub fn to_exit(&self) -> ExitCode {
        ExitCode::from(self.exit_code())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_class() {
        assert_eq!(CliError::from(CoreError::BudgetExceeded { terms: 10, budget: 1 }).exit_code(), 4);
        assert_eq!(CliError::from(CoreError::InvariantViolation("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(CoreError::Shape("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(CoreError::UndefinedRatio).exit_code(), 1);
    }
}
