//! Experiment driver behind the `lp-lab` binary.

pub mod config;
pub mod experiments;
pub mod report;
pub mod table;

pub use config::ExperimentConfig;
pub use experiments::{run, Artifact, Experiment, Outcome};
pub use report::{Check, Report, Status};
pub use table::{NormRow, NormTable};
