//! Configured experiments and their reports.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{ConfigFile, ExperimentConfig, ExperimentKind, SequenceSource};
pub use report::{emit_report, ExperimentReport, OutputFormat, ScalarResult};
pub use runner::run_experiment;
