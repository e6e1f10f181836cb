//! File formats, scenario configuration, reports and command
//! implementations for the `gife` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod report;

pub use commands::{cmd_check, cmd_evolve, cmd_generate, cmd_search, family_metadata};
pub use config::{Overrides, ScenarioConfig};
pub use error::{CliError, CliResult};
pub use report::Report;

/// Exit status when a verdict, assertion or consistency check fails.
pub const EXIT_VERDICT_FAILURE: i32 = 1;
/// Exit status for unreadable or invalid input and capacity errors.
pub const EXIT_INPUT_ERROR: i32 = 2;
