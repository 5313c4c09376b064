//! Experiment driver for higher-order digital nets. The binary lives in
//! `main.rs`; everything else is a library so the integration and
//! acceptance suites can drive the commands in-process.

pub mod args;
pub mod build;
pub mod commands;
pub mod error;
pub mod fit;
pub mod integrands;
pub mod output;

pub use error::{CliError, CliResult};
pub use fit::{fit_rate, Fit};
