//! Expression language and command dispatch for the `starforge` binary.

pub mod commands;
pub mod lower;
pub mod parse;

use thiserror::Error;

pub use commands::{run, CommandResult};
pub use lower::{lower, Value};
pub use parse::{parse_expression, render, Expr, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Engine(#[from] starforge_core::error::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Engine(_) => "engine",
            CliError::Usage(_) => "usage",
        }
    }
}
