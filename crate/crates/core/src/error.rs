use std::path::PathBuf;

use thiserror::Error;

use crate::qp::SolveStatus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid case: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("generator {generator}: ramping window [{lo}, {hi}] does not intersect capacity")]
    EmptyInterval { generator: String, lo: f64, hi: f64 },

    #[error("solver returned {status:?}{}", context.as_deref().map(|c| format!(" ({c})")).unwrap_or_default())]
    Solver {
        status: SolveStatus,
        context: Option<String>,
    },

    #[error("period {period}: {source}")]
    Period {
        period: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("oracle enumeration budget exceeded: {lines} lines (limit {limit})")]
    OracleBudget { lines: usize, limit: usize },
}

impl Error {
    pub(crate) fn at_period(self, period: usize) -> Self {
        Error::Period {
            period,
            source: Box::new(self),
        }
    }

    pub(crate) fn solver(status: SolveStatus, context: impl Into<String>) -> Self {
        Error::Solver {
            status,
            context: Some(context.into()),
        }
    }
}
