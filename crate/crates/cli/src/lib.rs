//! Experiment harness around `discrete-pw`: config-driven synthesis,
//! sampling, reconstruction and verification runs with JSON and CSV output.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{ExperimentConfig, FSpec, LambdaSpec, Overrides};
pub use error::{CliError, Exit};
pub use experiments::{run, verify, Command};
pub use output::{Artifacts, Table};
