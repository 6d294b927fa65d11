use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("interval {start}..{end} out of range for length {len}")]
    IntervalOutOfRange {
        start: usize,
        end: usize,
        len: usize,
    },

    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("codebook construction exhausted its candidate pool: admitted {found} of {needed} codewords")]
    CodebookInfeasible { found: usize, needed: usize },

    #[error("corruption budget {budget} too small: strategy requires {required} edits")]
    BudgetExceeded { budget: usize, required: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("analysis refused: {0}")]
    AnalysisRefused(String),

    #[error("reduction infeasible: {0}")]
    ReductionInfeasible(String),

    #[error("completeness violation: {0}")]
    CompletenessViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
