//! Experiment orchestration: configuration, suites and reports.

pub mod cli;
pub mod config;
pub mod report;
pub mod suites;

pub use config::{ExperimentConfig, MuEntry, Overrides, Suite};
pub use report::{BoundReport, BoundRow, SuiteReport, Table};
pub use suites::run_suite;
