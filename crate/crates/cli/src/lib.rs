//! Command-line front end for `loadshare-core`: CSV dataset ingestion,
//! simulation, closed-form fitting, oracle verification and Monte Carlo
//! recovery studies.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error, 3 verification failure.
//! Standard output carries only the requested artifact; diagnostics go to
//! standard error.

pub mod args;
pub mod commands;
pub mod dataset;
mod error;
pub mod params_file;
pub mod render;
pub mod study;

pub use error::CliError;
