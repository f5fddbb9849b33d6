use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: deviation {deviation:e} at scale {scale:e}")]
    NotHermitian { deviation: f64, scale: f64 },
    #[error("invalid spin system: {0}")]
    InvalidSpec(String),
    #[error("resonance condition violated: {0}")]
    Resonance(String),
    #[error("time-dependent drive present; use the driven evolver")]
    DrivenSpec,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("no solution found: {0}")]
    NoSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
