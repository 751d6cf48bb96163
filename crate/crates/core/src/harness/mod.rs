//! Experiment configuration, result tables, the experiment runner and the
//! acceptance suite.

mod acceptance;
mod config;
mod run;
mod table;

pub use acceptance::{
    criterion, run_acceptance, AcceptanceReport, CriterionOutcome, Suite, CRITERIA,
};
pub use config::{Experiment, ExperimentConfig, Scaling};
pub use run::{
    calibrate_ladder_constant, ladder_panel, ladder_values, run, two_denominator_panel,
    two_denominator_scan, LadderPoint, RunOutput, TwoDenominatorRow, TwoDenominatorScan,
    LADDER_CONSTANT, LADDER_PANEL_SEED, SINGULAR_THETA_EPSILON, TWO_DENOMINATOR_SLACK,
};
pub use table::{check_golden, Column, ColumnData, ResultTable};

use crate::graphs::GraphError;
use crate::kinetic::KineticError;
use crate::quantum::QuantumError;
use crate::spectral::SpectralError;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "QLZ_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {field}: {message}")]
    ConfigInvalid { field: String, message: String },
    #[error("golden table {path} was produced by config {found}, expected {expected}")]
    StaleGolden { path: String, expected: String, found: String },
    #[error("malformed table: {0}")]
    Table(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Kinetic(#[from] KineticError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl HarnessError {
    pub fn invalid(field: &str, message: impl Into<String>) -> Self {
        Self::ConfigInvalid { field: field.to_string(), message: message.into() }
    }
}

/// Worker count: the requested value (or the machine's parallelism) capped
/// by `QLZ_THREADS`.
pub fn thread_count(requested: Option<usize>) -> usize {
    let available = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(usize::MAX);
    requested.unwrap_or(available).clamp(1, cap.max(1))
}

/// Installs the global rayon pool with [`thread_count`] workers. Only the
/// first call in a process takes effect; returns the count in force.
pub fn init_threads(requested: Option<usize>) -> usize {
    let n = thread_count(requested);
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    rayon::current_num_threads()
}
