use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown generator `{0}`")]
    UnknownLetter(String),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("invalid Coxeter matrix entry m({a},{b}) = {value}: {reason}")]
    InvalidEntry {
        a: String,
        b: String,
        value: String,
        reason: &'static str,
    },

    #[error("operation requires a right-angled system")]
    NotRightAngled,

    #[error("operation requires an irreducible system (found {0} components)")]
    Reducible(usize),

    #[error("braid-orbit search exhausted its budget of {0} words")]
    BudgetExhausted(usize),

    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    #[error("scope violation: {0}")]
    Scope(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = CoxError> = std::result::Result<T, E>;
