//! Command-line front end: configuration, published presets and output
//! writers around the `thermoporo` solver.

pub mod app;
pub mod commands;
pub mod config;
pub mod output;
pub mod reference;

pub use commands::CliError;
pub use config::{RunConfig, Settings, TableId};
