//! Random Schrödinger evolution on the cubic lattice: spectral tools for the
//! nearest-neighbour dispersion, split-step quantum evolution with Duhamel and
//! Wigner diagnostics, the momentum jump process and its diffusive limit,
//! graph amplitudes for the permutation expansion, and an experiment harness.
//!
//! Numerical types are generic over [`Real`]; the aliases below fix the
//! precision for the common cases.

pub mod graphs;
pub mod harness;
pub mod kinetic;
pub mod quad;
pub mod quantum;
pub mod rng;
pub mod scalar;
pub mod spectral;
pub mod stats;

pub use scalar::Real;

pub type Dispersion64 = spectral::Dispersion<f64>;
pub type Dispersion32 = spectral::Dispersion<f32>;
pub type ShellSpec64 = spectral::ShellSpec<f64>;
pub type ShellSpec32 = spectral::ShellSpec<f32>;
pub type ThetaGrid64 = spectral::ThetaGrid<f64>;
pub type RenormalizedDispersion64 = spectral::RenormalizedDispersion<f64>;
pub type JumpProcess64 = kinetic::JumpProcess<f64>;
pub type JumpPath64 = kinetic::JumpPath<f64>;
pub type JumpPath32 = kinetic::JumpPath<f32>;
pub type DiffusionMatrix64 = kinetic::DiffusionMatrix<f64>;
pub type DiffusionMatrix32 = kinetic::DiffusionMatrix<f32>;
pub type HeatSolution64 = kinetic::HeatSolution<f64>;
