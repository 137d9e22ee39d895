use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("time window [{lo}, {hi}] is not covered by the stored window [{stored_lo}, {stored_hi}]")]
    OutOfWindow {
        lo: i64,
        hi: i64,
        stored_lo: i64,
        stored_hi: i64,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("enumeration needs {terms} terms, budget is {budget}")]
    BudgetExceeded { terms: u128, budget: u128 },

    #[error("contradictory constraints at site {site:?}, time {time}")]
    Contradiction { site: Vec<i64>, time: i64 },

    #[error("ratio undefined: reference event has probability zero")]
    UndefinedRatio,

    #[error("exhaustive patch scan unsupported for dimension {0} (d <= 2)")]
    UnsupportedDimension(usize),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("conditioning infeasible: acceptance rate {rate} below floor {floor}")]
    InfeasibleConditioning { rate: f64, floor: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
