use thiserror::Error;

use crate::model::{ModelKind, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown agent {0}")]
    UnknownAgent(usize),

    #[error("agent {agent} does not find {alternative} acceptable")]
    Unacceptable { agent: usize, alternative: String },

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("invalid instance: {}", join_violations(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("operation requires a {expected} instance, got {found}")]
    WrongModel { expected: String, found: ModelKind },

    #[error("restriction violated by agent {agent}: {restriction}")]
    RestrictionViolated { agent: usize, restriction: String },

    #[error("refused: {0}")]
    RefusedTooLarge(String),

    #[error("graph error: {0}")]
    Graph(String),

    #[error("invalid X3C instance: {0}")]
    InvalidX3c(String),

    #[error("not an exact cover: {0}")]
    InvalidCover(String),

    #[error("i/o error: {0}")]
    Io(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
