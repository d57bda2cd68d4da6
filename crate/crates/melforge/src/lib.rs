//! File formats, reproduction reports and the command line for
//! `melforge-core`.

pub mod cli;
pub mod error;
pub mod files;
pub mod report;
pub mod repro;
pub mod sweep;

pub use error::{CliError, Result};
