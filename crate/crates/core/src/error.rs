use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("letter {letter} out of range 1..={d}")]
    LetterOutOfRange { letter: usize, d: usize },

    #[error("invalid q matrix at ({i},{j}): {reason}")]
    InvalidQ { i: usize, j: usize, reason: String },

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("matrix is not Hermitian (deviation {deviation:e} at ({row},{col}))")]
    NonHermitian { row: usize, col: usize, deviation: f64 },

    #[error("matrix is singular or not positive definite: {0}")]
    Singular(String),

    #[error("ill-conditioned middle factor for letter {letter} (condition {condition:e}) in window {window}")]
    IllConditioned {
        letter: usize,
        condition: f64,
        window: String,
    },

    #[error("window too small: {0}")]
    WindowTooSmall(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
