use std::io;

use thiserror::Error;

/// Errors produced by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: u64, residual: f64 },

    #[error("size cap exceeded: {what} needs {requested}, cap is {cap}")]
    SizeCap {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("integer overflow computing {0}")]
    Overflow(String),

    #[error("singular linear system")]
    Singular,

    #[error("no surviving replicas at t = {t_star} (out of {replicas})")]
    NoSurvivors { t_star: u64, replicas: u64 },

    #[error("regression needs at least 2 points, {kept} kept after trimming")]
    TooFewPoints { kept: usize },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Json(_) => 2,
            Error::NonConvergence { .. }
            | Error::Singular
            | Error::NoSurvivors { .. }
            | Error::TooFewPoints { .. } => 3,
            Error::SizeCap { .. } | Error::Overflow(_) => 4,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
