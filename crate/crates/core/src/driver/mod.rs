//! The global transient fixed-point loop, its configuration and the
//! convergence-study harness.

mod config;
mod run;
mod study;

pub use config::{FixedPointConfig, InitialMesh, CONFIG_KEYS};
pub use run::{global_fixed_point, records_to_csv, IterationSummary, RunResult, StudyRecord, CSV_HEADER};
pub use study::{convergence_study, fit_rate, sweep_configs, StudyKind, StudyPoint, StudyResult, SUMMARY_HEADER};
