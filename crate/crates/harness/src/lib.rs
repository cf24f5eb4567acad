//! Experiment harness for the `parsubmod` solvers: instance files and
//! generators, a density-greedy baseline, a seeded sweep runner with CSV
//! output, and property suites.

pub mod config;
pub mod data;
pub mod error;
pub mod experiment;
pub mod greedy;
pub mod instance;
pub mod output;
pub mod verify;

pub use config::{Algorithm, ConstraintKind, ExperimentConfig, Problem};
pub use error::{HarnessError, Result};
pub use experiment::{normalize, run_experiment, ResultRow};
pub use greedy::density_greedy;
pub use output::{read_csv, to_csv_string, write_csv};
