//! Expression evaluator and suite runner over `planarhopf-core`.

pub mod config;
pub mod eval;
pub mod expr;
pub mod gen;
pub mod render;
pub mod suites;

pub use config::Session;
pub use eval::{eval, Value};
pub use render::Format;
pub use suites::{run_suite, SuiteReport, SUITES};

use planarhopf_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown function '{name}' at {pos}")]
    UnknownFunction { name: String, pos: usize },
    #[error("{func}: {msg}")]
    BadArgs { func: String, msg: String },
    #[error("in {context}: {source}")]
    Core { context: String, source: CoreError },
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, CliError>;
