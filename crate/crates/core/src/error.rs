use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("partial quotient at position {position} is {digit}; digits must be at least 1")]
    InvalidDigit { position: usize, digit: u64 },

    #[error("operation requires a non-empty word")]
    EmptyWord,

    #[error("rational {0} lies outside [0, 1)")]
    OutOfUnitInterval(String),

    #[error("invalid growth function: {0}")]
    InvalidGrowth(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("table growth function has no declared tail family")]
    TailUndeclared,

    #[error("limit of log Phi(n)/n does not exist for the second growth function")]
    LimitMissing,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration needs {required} words but the budget is {budget}")]
    BudgetExceeded { required: f64, budget: u64 },

    #[error("no root: f_n(s) > 1 for every s <= {upper}")]
    NoRoot { upper: f64 },

    #[error("power iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("{nodes} collocation nodes under-resolve the operator: doubling moved log(lambda) by {shift:e}")]
    UnderResolved { nodes: usize, shift: f64 },

    #[error("alphabet ladder decreases by {drop:e} between entries {index} and {next}", next = index + 1)]
    MonotonicityViolation { index: usize, drop: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("scheme infeasible: {0}")]
    Infeasible(String),

    #[error("word is not a prefix of the Cantor set")]
    NotInScheme,

    #[error("degenerate box-counting ladder: {0}")]
    DegenerateLadder(String),

    #[error("integer overflow in continuant recurrence at depth {depth}")]
    ContinuantOverflow { depth: usize },
}
