use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by graph construction, sampling, scoring and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input (bad node id, empty score list, NaN, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// A parameter lies outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A text file could not be parsed.
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    /// Rejection sampling exceeded its attempt budget.
    #[error("sampler saturated after {attempts} attempts ({found} of {wanted} negatives found); graph too dense")]
    Saturated {
        attempts: u64,
        found: usize,
        wanted: usize,
    },

    /// A generator could not satisfy its constraints.
    #[error("generation failed: {0}")]
    Generation(String),

    #[error("{}: {source}", path.display())]
    File {
        path: std::path::PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
