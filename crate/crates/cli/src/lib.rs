//! Experiment runner for `ccgbo`: TOML configs in, CSV traces and JSON
//! summaries out.

pub mod config;
pub mod error;
pub mod experiment;
pub mod summary;
pub mod trace;

pub use config::{parse_config, ExperimentConfig, SummaryFormat};
pub use error::{CliError, Result};
pub use experiment::{run_experiment, ExperimentReport, RunFailure};
pub use summary::{summarize_dir, summarize_records, SummaryRow};
pub use trace::TraceRecord;
