//! File formats, certificates, tables and the command-line front end for `spheremap-core`.

pub mod cert;
pub mod cli;
pub mod formats;
pub mod io;
pub mod parallel;
pub mod table;

pub use spheremap_core;

/// Errors that stop a command before any verdict; they map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] spheremap_core::Error),
}

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INPUT: i32 = 2;
}
