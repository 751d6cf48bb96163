//! Schrödinger evolution of the Anderson model on a finite torus, the
//! Duhamel expansion, and Wigner-transform diagnostics.

mod disorder;
mod duhamel;
mod evolve;
mod fft;
pub mod io;
mod lattice;
mod wave;
mod wigner;

pub use disorder::{sample_disorder, DisorderKind, DisorderSample};
pub use duhamel::{
    duhamel_term, duhamel_terms, DuhamelOptions, FreeSymbol, DEFAULT_DUHAMEL_NODES,
    MAX_DUHAMEL_ORDER,
};
pub use evolve::{evolve, Evolver, STEP_GUARD};
pub use fft::FftPlan;
pub use lattice::TorusLattice;
pub use wave::WaveFunction;
pub use wigner::{
    rescaled_wigner, test_observable, wigner, ObservableKernel, WignerField, WignerGrid,
    MAX_WIGNER_CELLS,
};

#[derive(Debug, thiserror::Error)]
pub enum QuantumError {
    #[error("torus side must be even and at least 8 with d ≥ 1, got L = {side}, d = {dim}")]
    InvalidLattice { side: usize, dim: usize },
    #[error("time step {dt} too large: dt·(2d + λ max|V|) = {bound} exceeds 0.5")]
    StepTooLarge { dt: f64, bound: f64 },
    #[error("Duhamel order {k} exceeds the supported maximum {max}")]
    OrderTooHigh { k: usize, max: usize },
    #[error("observable and Wigner field live on different grids")]
    GridMismatch,
    #[error("wavefunction lives on a different lattice")]
    LatticeMismatch,
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed field file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
