use thiserror::Error as ThisError;

#[derive(ThisError, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("image of `{letter}` is not a nonempty pure positive word")]
    NotPositive { letter: String },
    #[error("inverse check fails on `{letter}` ({detail})")]
    NotInverse { letter: String, detail: String },
    #[error("incidence matrix is not primitive")]
    NotPrimitive,
    #[error("word length budget of {limit} letters exceeded")]
    BudgetExceeded { limit: usize },
    #[error("empty input word")]
    EmptyInput,
    #[error("shift of a development in D_min/D_max needs a seed completion")]
    UndefinedShift,
    #[error("power search cap {cap} exceeded")]
    CapExceeded { cap: u64 },
    #[error("index formulas disagree: {left} vs {right} (doubled)")]
    FormulaMismatch { left: i64, right: i64 },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
