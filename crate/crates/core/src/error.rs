use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for an alphabet of {rank} generators")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("alphabet mismatch: {left} vs {right} generators")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("unsupported ring homomorphism {from} -> {to}")]
    UnsupportedTheta { from: String, to: String },

    #[error("degree {degree} out of range, must be below {limit}")]
    DegreeOutOfRange { degree: usize, limit: usize },

    #[error("truncation bound mismatch: {left} vs {right}")]
    BoundMismatch { left: usize, right: usize },

    #[error("truncation bound {bound} too small, need at least {required}")]
    BoundTooSmall { bound: usize, required: usize },

    #[error("constant term of the series is not 1")]
    NotUnit,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not upper unitriangular")]
    NotUnipotent,

    #[error("matrix is not an element of {0}")]
    NotInGroup(String),

    #[error("{0} is infinite")]
    Infinite(String),

    #[error("budget exceeded: {what} needs {needed}, cap is {cap}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        cap: u128,
    },

    #[error("filtration series did not stabilize within {0} terms")]
    SeriesUnstable(usize),

    #[error("malformed json: {0}")]
    Json(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, needed: u128, cap: u128) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed,
            cap,
        }
    }

    /// True for the budget family, which the CLI maps to its own exit code.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
