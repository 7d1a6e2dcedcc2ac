use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates an invariant. `field` is a dotted path
    /// into the scenario file (e.g. `mission.total_time_s`).
    #[error("invalid configuration `{field}`: {reason}")]
    Config { field: String, reason: String },

    /// The scenario file is not well-formed or does not match the schema.
    #[error("malformed scenario file: {0}")]
    Schema(#[from] serde_json::Error),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    /// The destination cannot be reached in the available number of steps.
    #[error(
        "mission infeasible: Chebyshev grid distance {distance} between start and destination exceeds {steps} steps"
    )]
    Infeasible { distance: usize, steps: usize },

    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
