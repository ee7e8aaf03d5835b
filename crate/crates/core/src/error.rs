use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoalitionError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoalitionError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "symmetry violation among size-{size} coalitions: {first:?} and {second:?} differ by {gap} (tolerance {tolerance})"
    )]
    SymmetryViolation {
        size: usize,
        first: Vec<usize>,
        second: Vec<usize>,
        gap: f64,
        tolerance: f64,
    },

    #[error("enumeration too large: m = {m} exceeds cap {cap} (B_{m} = {bell} structures)")]
    EnumerationTooLarge { m: usize, cap: usize, bell: BigUint },

    #[error("size index {k} out of range 1..={m}")]
    IndexOutOfRange { k: usize, m: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate hyperplane system: m = 1 has a single all-zero row")]
    DegenerateSystem,

    #[error("non-finite frequency x_{index} at t = {time}")]
    NonFiniteState { time: f64, index: usize },

    #[error("{clamped} of {steps} steps clamped a negative frequency; step size too large")]
    ExcessiveClamping { clamped: usize, steps: usize },

    #[error("invalid dynamics configuration: {0}")]
    InvalidConfig(String),
}
