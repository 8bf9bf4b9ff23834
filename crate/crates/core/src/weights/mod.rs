//! Message-weight schedules, their shift-and-add representation, and the
//! random-search optimizer that picks them.

mod optimize;
mod p2;
mod schedule;

pub use optimize::{default_value_set, draw_candidates, optimize, CandidateScore, Objective, OptimizeResult, OptimizerConfig};
pub use p2::{all_decompositions, p2_encode, P2Term, P2Weight, MAX_EXPONENT, MAX_TERMS, MIN_EXPONENT};
pub use schedule::{
    format_decimal, load_table1, parse_decimal, CompiledSchedule, Violation, WeightSchedule,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("a shift-add weight needs 1 to 3 terms, got {0}")]
    TermCount(usize),
    #[error("exponent {0} outside -3..=2")]
    ExponentRange(i8),
    #[error("terms must have distinct exponents")]
    RepeatedExponent,
    #[error("weight {0} is not positive")]
    NonPositive(String),
    #[error("weight {0} is not a sum of at most three powers of two in 2^-3..2^2")]
    Unrepresentable(String),
    #[error("not a decimal number: {0:?}")]
    Decimal(String),
    #[error("invalid weight schedule file: {0}")]
    Json(String),
    #[error("no published schedule for q = {0}; available for q = 2 and 3")]
    NoPublishedSchedule(u8),
    #[error("optimizer: {0}")]
    Optimizer(String),
}
