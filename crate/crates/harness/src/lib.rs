//! Experiment runner for entropy-gated contextual bandits: TOML configs,
//! parallel seeded runs, CSV artifacts and a comparison report.

pub mod config;
pub mod error;
pub mod io;
pub mod report;
pub mod runner;

pub use config::{ExperimentConfig, FeedbackType, DEFAULT_LAMBDAS};
pub use error::{HarnessError, Result};
pub use io::{load_xmlc, read_round_csv, read_summary_csv, RoundRecord, SummaryRow};
pub use report::{build_report, Report};
pub use runner::{execute_run, execute_sweep, run_experiment, run_grid, LoadedEnv};
