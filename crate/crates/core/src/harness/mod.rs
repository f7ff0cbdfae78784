//! Experiment harness: configuration, CSV emission, run manifests and the
//! figure/protocol drivers behind the command-line interface.

pub mod commands;
pub mod config;
pub mod csv;
pub mod manifest;

pub use commands::{run_command, write_outputs, Command, CommandOutcome};
pub use config::ExperimentConfig;
pub use manifest::RunManifest;
