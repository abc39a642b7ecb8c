//! Command-line front end for `thermoqubit`: temperature sweeps, Wigner grid
//! exports and the verification suite.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] thermoqubit::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("check failed: {0}")]
    Check(String),
}

/// Environment variable capping the worker thread count (`0` = automatic).
pub const THREADS_ENV: &str = "THERMOQUBIT_THREADS";

/// Sizes the global thread pool from [`THREADS_ENV`].
pub fn init_thread_pool() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{THREADS_ENV} must be an integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}
