use thiserror::Error;

/// Errors produced by the meter identification engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,

    #[error("unknown transliteration scheme `{0}`")]
    UnknownScheme(String),

    #[error("unknown gana letter `{letter}` at position {position}")]
    UnknownGanaLetter { letter: char, position: usize },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("duplicate meter name `{0}`")]
    DuplicateMeterName(String),

    #[error("line {line}: gana formula `{formula}` is not in canonical form")]
    InvalidGanaFormula { line: usize, formula: String },

    #[error("target length must be at least 1")]
    ZeroTargetLength,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
