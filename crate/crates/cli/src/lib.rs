//! Command-line front end for the `active-sites` library.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod svg;

pub use args::Cli;
pub use commands::run;
pub use error::{CliError, CliResult};
