use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `L[index] < p[index-1]^2` in a user schedule.
    #[error("schedule violation at index {index}: L = {value} is below the required minimum {minimum}")]
    ScheduleViolation {
        index: usize,
        value: BigInt,
        minimum: BigInt,
    },

    #[error("explicit schedule has only {available} levels, level {requested} was requested")]
    ScheduleExhausted { requested: usize, available: usize },

    #[error("ladder is populated to depth {available}, level {requested} is required")]
    Depth { requested: usize, available: usize },

    #[error("argument {t} lies outside [-p, p] = [-{bound}, {bound}] at level {level}")]
    OutOfDomain {
        level: usize,
        t: String,
        bound: BigInt,
    },

    /// Fixed-width scalars only; arbitrary-precision integers never overflow.
    #[error("integer overflow in fixed-width scalar while computing {0}")]
    Overflow(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("shift by {shift} leaves an empty window of length {len}")]
    EmptyWindow { shift: u64, len: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("orbit exhausted: index {index} requested, source defines {available} coordinates")]
    OrbitExhausted { index: u64, available: u64 },

    #[error("no occurrence found within horizon {horizon}")]
    NotFoundInHorizon { horizon: u64 },
}
