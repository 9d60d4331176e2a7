use std::path::Path;

use nst_core::montecarlo::McError;
use nst_core::ModelError;
use thiserror::Error;

/// Everything a command can fail with, one variant per exit code class.
#[derive(Debug, Error)]
pub enum AppError {
    #[error("{flag}: {message}")]
    Flag { flag: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}: {message}")]
    Csv {
        path: String,
        line: u64,
        message: String,
    },
    #[error("{subject}: {message}")]
    Solver { subject: String, message: String },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Flag { .. } => 2,
            AppError::Io { .. } | AppError::Csv { .. } => 3,
            AppError::Solver { .. } => 4,
            AppError::Verification(_) => 5,
        }
    }

    pub fn flag(flag: &str, message: impl Into<String>) -> Self {
        AppError::Flag {
            flag: flag.to_string(),
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        AppError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    /// Domain errors become flag errors naming the flag; anything else is a
    /// failure of the numerics for `subject`.
    pub fn from_model(err: ModelError, subject: impl std::fmt::Display) -> Self {
        match err {
            ModelError::InvalidParameter { name, .. } => AppError::flag(&flag_for(name), err.to_string()),
            other => AppError::Solver {
                subject: subject.to_string(),
                message: other.to_string(),
            },
        }
    }

    pub fn from_mc(err: McError, subject: impl std::fmt::Display) -> Self {
        match err {
            McError::InvalidConfig { name, .. } => AppError::flag(&flag_for(name), err.to_string()),
            McError::Model(m) => AppError::from_model(m, subject),
            other => AppError::Solver {
                subject: subject.to_string(),
                message: other.to_string(),
            },
        }
    }
}

fn flag_for(name: &str) -> String {
    let flag = match name {
        "n_paths" | "n" => "paths",
        "x" | "z" => "t",
        other => other,
    };
    format!("--{flag}")
}
