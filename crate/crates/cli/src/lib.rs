//! Command line front end: vote files, result documents and subcommands.

pub mod commands;
pub mod document;
pub mod error;
pub mod votefile;

pub use commands::{run_args, Cli, Invocation};
pub use document::{Decision, ResultDocument};
pub use error::CliError;
pub use votefile::{parse_votes, serialize_votes, ParseError};
