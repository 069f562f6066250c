//! Command-line front end for `bosent-core`: state files, deterministic
//! reports and the `ep`, `transfer`, `measure`, `sweep` and `bounds`
//! commands.

pub mod commands;
pub mod error;
pub mod report;
pub mod statefile;

pub use commands::{check_violations, run, Cli, Command};
pub use error::CliError;
pub use report::{emit, Format, RunReport};
