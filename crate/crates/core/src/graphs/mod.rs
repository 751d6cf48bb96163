//! Permutation graphs of paired Duhamel expansions: the incidence matrix,
//! vertex classification, degree census, the frequency representation of
//! the simplex propagator and finite-torus graph amplitudes.

mod amplitude;
mod census;
mod classify;
mod contour;
mod matrix;
mod oracle;
mod permutation;

pub use amplitude::{
    amplitude, amplitude_with_packet, e_eta_bound, gate_term, ladder_dominance, packet_fourier,
    AmplitudeEngine, AmplitudeEstimate, AmplitudeParams, BoundCheck, FreeKind, MomentumAmplitude,
    MAX_AMPLITUDE_K, MAX_BOUND_K,
};
pub use census::{degree_census, envelope_constant, MAX_CENSUS_K};
pub use classify::{classify, VertexClassification};
pub use contour::{
    contour_identity_check, contour_integral, pole_spread, simplex_scale, simplex_integral, AlphaRule,
    ContourOptions, MAX_CONTOUR_K,
};
pub use matrix::{build_m, IntMatrix, DEFAULT_TU_SAMPLES, EXHAUSTIVE_TU_MAX};
pub use oracle::{graph_sum_vs_disorder, GraphSumConfig, GraphSumReport, PairingTerm, MAX_ORACLE_K};
pub use permutation::GraphPermutation;

use crate::quantum::QuantumError;
use crate::spectral::SpectralError;

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("not a permutation of 1..=k: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("exhaustive minor enumeration limited to size {max}, got {size}")]
    SizeTooLargeForExhaustive { size: usize, max: usize },
    #[error("k = {k} exceeds the supported maximum {max}")]
    KTooLarge { k: usize, max: usize },
    #[error("frequency quadrature tail {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    QuadratureDivergence { estimate: f64, tolerance: f64 },
    #[error("momentum grid of {grid} points per axis cannot resolve the amplitude")]
    ResolutionTooCoarse { grid: usize },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
