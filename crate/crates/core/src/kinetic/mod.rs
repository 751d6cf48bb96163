//! The linear Boltzmann momentum jump process on an energy shell, its
//! diffusion matrix, the heat-equation limit and the comparison against
//! quantum evolution.

mod compare;
mod diffusion;
mod heat;
mod jump;

pub use compare::{
    boltzmann_run, energy_histogram, kinetic_comparison, quantum_run, ComparisonReport,
    ComparisonSetup, Discrepancy, Observables, RateTable,
};
pub use diffusion::{
    ballistic_prediction, diffusion_autocorrelation, diffusion_closed_form, msd_diffusive_check,
    DiffusionMatrix, MsdReport, MsdRow, MIN_CUTOFF_WAITS,
};
pub use heat::{heat_kernel, HeatSolution};
pub use jump::{jump_rate, simulate_jump_process, JumpPath, JumpProcess};

use crate::quantum::QuantumError;
use crate::spectral::SpectralError;

#[derive(Debug, thiserror::Error)]
pub enum KineticError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("cutoff {t_cut} is shorter than 5 mean waiting times ({mean_wait} each)")]
    CutoffTooShort { t_cut: f64, mean_wait: f64 },
    #[error("diffusion matrix is not positive semidefinite")]
    NotPsd,
    #[error("runs were prepared on different grids or times")]
    GridMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
