//! Std companion to `driftloc-core`: embedding CSV ingestion, bench
//! configuration files, CSV/SVG reports, run manifests and the `driftloc`
//! command-line tool.

pub mod cli;
pub mod config;
pub mod csv_io;
pub mod error;
pub mod grid;
pub mod manifest;
pub mod methods;
pub mod report;

pub use error::{CliError, CliResult};
