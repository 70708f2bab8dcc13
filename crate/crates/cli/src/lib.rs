//! Command-line front end: configuration files with units, parameter sweeps,
//! CSV/JSON outputs and replayable run manifests.

pub mod app;
pub mod commands;
pub mod config;
pub mod manifest;
pub mod output;
pub mod sweep;

pub use app::{replay, run, run_to_dir};
pub use commands::{execute, Invocation, RunOutput};
pub use config::{Command, RawConfig, Settings};
pub use manifest::RunManifest;
pub use sweep::SweepSpec;
