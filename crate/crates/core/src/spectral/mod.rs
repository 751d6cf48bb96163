//! Lattice dispersion, energy-shell integrals, the self-energy and the
//! singular two-propagator integrals.

mod dispersion;
mod shell;
mod singular;
mod theta;

pub use dispersion::{axis_energy, wrap, Dispersion};
pub use shell::{
    default_width, phi, phi_profile, shell_average, shell_average_vec, ShellSampler, ShellSpec,
};
pub use singular::{
    ladder_integral, two_denominator_bound_ratio, two_denominator_integral, Orientation,
    TWO_DENOMINATOR_TAU,
};
pub use theta::{
    default_resolution, renormalized_dispersion, theta, RenormalizedDispersion, SelfEnergy,
    SelfEnergyTable, ThetaGrid, MAX_THETA_NODES,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("no sample landed in the energy shell around e = {energy}")]
    EmptyShell { energy: f64 },
    #[error("grid energy spacing {spacing:.3e} exceeds the resolved scale {scale:.3e}")]
    ResolutionTooCoarse { spacing: f64, scale: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
