//! Command-line front end: JSON system files and the `naimark` subcommands.

pub mod commands;
pub mod format;

pub use commands::{run, Cli, CliError, Status};
pub use format::{DilationBlock, FormatError, SystemFile};
