use thiserror::Error;

/// Errors raised while validating inputs or evaluating exponents.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("row {row} of the channel is not stochastic (sum = {sum})")]
    NonStochasticRow { row: usize, sum: f64 },

    #[error("{what} is not a probability vector (sum = {sum})")]
    NotNormalized { what: &'static str, sum: f64 },

    #[error("{what}: entry {index} = {value} outside [0, 1]")]
    EntryOutOfRange {
        what: &'static str,
        index: usize,
        value: f64,
    },

    #[error("dimension mismatch: {what} (expected {expected}, got {got})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("rate t must be positive and finite, got {0}")]
    NonPositiveRate(f64),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("distribution set is empty")]
    EmptySet,

    #[error("invalid rho grid: {0}")]
    InvalidGrid(String),

    #[error("curve contains a non-finite value at index {index}: {value}")]
    NonFiniteInput { index: usize, value: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("degenerate slope: rho2 - rho1 = {0} is below 1e-12")]
    DegenerateSlope(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("source symbol {symbol} outside alphabet of size {size}")]
    AlphabetMismatch { symbol: usize, size: usize },

    #[error("type enumeration needs {needed} records, budget is {budget}")]
    EnumerationBudgetExceeded { needed: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
