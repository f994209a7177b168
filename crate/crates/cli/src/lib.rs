//! Command-line front end for `homcover`.

pub mod command;
pub mod output;
pub mod run;

pub use command::{Command, Format, Subcommand};
pub use output::{Record, Report, Value};
pub use run::{run_command, CliError, Outcome};
