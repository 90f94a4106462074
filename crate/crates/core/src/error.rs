use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("invalid algebra presentation: {0}")]
    InvalidAlgebra(String),
    #[error("element is not nilpotent")]
    NotNilpotent,
    #[error("not a unit: {0}")]
    NotUnit(String),
    #[error("series precondition violated: {0}")]
    Series(String),
    #[error("inadmissible Laplace parameter: {0}")]
    Inadmissible(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
