//! Front end for the teleportation simulator: argument and config handling,
//! the `run`, `sweep` and `verify` commands, and CSV/JSON rendering.

pub mod amplitude;
pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use error::CliError;

/// Version tag written into every JSON document.
pub const SCHEMA_VERSION: u32 = 1;
