//! File formats, JSON results and the command driver behind the
//! `maxent-recon` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod json;
pub mod report;

pub use commands::{run, Command, Outcome};
pub use config::{Overrides, RunConfig};
pub use error::CliError;
