use thiserror::Error;

/// Errors raised by constructions and searches.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("morphisms `{0}` and `{1}` do not share a target")]
    NotCospan(String, String),
    #[error("budget of {limit} steps exhausted during {during}")]
    BudgetExhausted { limit: u64, during: &'static str },
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid morphism of assemblers: {0}")]
    InvalidMorphism(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("construction check failed: {0}")]
    Construction(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExhausted { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
