//! Configuration handling and mode drivers behind the `qwalk` binary.

pub mod config;
pub mod runner;

pub use config::{resolve, ExperimentConfig, InitialCondition, Mode, Overrides, ScheduleSpec};
pub use runner::{execute, CliError};
