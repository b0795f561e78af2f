//! Configuration, sweeps and output formats behind the `ehcrn` binary.

pub mod config;
pub mod error;
pub mod output;
pub mod sweep;
pub mod validate;

pub use error::{CliError, Result};
