use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("zero-sided relation: a binomial relation may not have the zero vector on one side")]
    ZeroSidedRelation,

    #[error("trivial relation: both sides are equal")]
    TrivialRelation,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("ideal is not primary to the maximal ideal: {0}")]
    NotPrimary(String),

    #[error("primary certificate search exhausted bound {bound}")]
    PrimaryUnknown { bound: u64 },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("refused: {precondition} ({theorem})")]
    Refused {
        precondition: String,
        theorem: String,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn refused(
        precondition: impl Into<String>,
        theorem: impl Into<String>,
        detail: impl Into<String>,
    ) -> Self {
        Error::Refused {
            precondition: precondition.into(),
            theorem: theorem.into(),
            detail: detail.into(),
        }
    }
}
