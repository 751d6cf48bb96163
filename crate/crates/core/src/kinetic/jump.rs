use rand::Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use super::KineticError;
use crate::rng::stream_rng;
use crate::scalar::Real;
use crate::spectral::{phi, Dispersion, ShellSampler, ShellSpec, SpectralError};
use crate::stats::Estimate;

/// One trajectory of the momentum jump process on a fixed energy shell.
///
/// `momenta[0]` is the initial momentum and `momenta[j]` the momentum after
/// the jump at `times[j - 1]`. Between jumps the position moves with
/// velocity ∇e(v)/2π = sin(2πv).
#[derive(Debug, Clone, PartialEq)]
pub struct JumpPath<T> {
    pub energy: T,
    pub t_end: T,
    pub times: Vec<T>,
    pub momenta: Vec<Vec<T>>,
}

impl<T: Real> JumpPath<T> {
    pub fn jumps(&self) -> usize {
        self.times.len()
    }

    /// Momentum in force at time t.
    pub fn momentum_at(&self, t: T) -> &[T] {
        let j = self.times.partition_point(|&s| s <= t);
        &self.momenta[j]
    }

    /// X(t) = ∫₀ᵗ sin(2πv(s)) ds.
    pub fn position(&self, disp: &Dispersion<T>, t: T) -> Vec<T> {
        let mut x = vec![T::zero(); disp.dim()];
        let mut vel = vec![T::zero(); disp.dim()];
        let mut start = T::zero();
        for (j, v) in self.momenta.iter().enumerate() {
            let stop = self.times.get(j).copied().unwrap_or(self.t_end).min(t);
            if stop > start {
                disp.velocity(v, &mut vel);
                for (xi, &vi) in x.iter_mut().zip(&vel) {
                    *xi = *xi + vi * (stop - start);
                }
            }
            if stop >= t {
                break;
            }
            start = stop;
        }
        x
    }

    /// Gaps between consecutive jump epochs, starting from time 0.
    pub fn waiting_times(&self) -> Vec<T> {
        let mut prev = T::zero();
        self.times
            .iter()
            .map(|&t| {
                let w = t - prev;
                prev = t;
                w
            })
            .collect()
    }
}

/// 2πΦ(e(v)), the total jump rate out of momentum v.
pub fn jump_rate<T: Real>(
    disp: &Dispersion<T>,
    v: &[T],
    width: T,
    budget: u64,
    seed: u64,
) -> Estimate {
    let shell = ShellSpec::new(disp.energy(v), width, budget);
    phi(disp, &shell, seed).scale(std::f64::consts::TAU)
}

/// Jump process on one shell: exponential clocks at a fixed rate and
/// outgoing momenta drawn from the shell measure, independent of the
/// incoming momentum.
#[derive(Debug, Clone, Copy)]
pub struct JumpProcess<T> {
    sampler: ShellSampler<T>,
    rate: T,
}

impl<T: Real> JumpProcess<T> {
    /// Rate 2πΦ(e) estimated with `shell.budget` uniform draws.
    pub fn new(disp: Dispersion<T>, shell: ShellSpec<T>, seed: u64) -> Result<Self, KineticError> {
        let est = phi(&disp, &shell, seed);
        if est.value <= 0.0 {
            return Err(SpectralError::EmptyShell { energy: shell.energy.as_f64() }.into());
        }
        Self::with_rate(disp, shell, T::of(std::f64::consts::TAU * est.value))
    }

    /// A rate of zero gives the collisionless (ballistic) process.
    pub fn with_rate(disp: Dispersion<T>, shell: ShellSpec<T>, rate: T) -> Result<Self, KineticError> {
        if !(rate >= T::zero()) {
            return Err(KineticError::InvalidParameter(format!("jump rate must be ≥ 0, got {rate:?}")));
        }
        Ok(Self { sampler: ShellSampler::new(disp, shell)?, rate })
    }

    pub fn rate(&self) -> T {
        self.rate
    }

    pub fn mean_wait(&self) -> T {
        T::one() / self.rate
    }

    pub fn dispersion(&self) -> &Dispersion<T> {
        self.sampler.dispersion()
    }

    pub fn shell(&self) -> &ShellSpec<T> {
        self.sampler.shell()
    }

    pub fn sample_momentum<R: Rng>(&self, rng: &mut R) -> Result<Vec<T>, KineticError> {
        Ok(self.sampler.sample(rng)?)
    }

    /// One path on [0, t_end]; the initial momentum is drawn from the shell
    /// unless given.
    pub fn path<R: Rng>(
        &self,
        t_end: T,
        rng: &mut R,
        initial: Option<Vec<T>>,
    ) -> Result<JumpPath<T>, KineticError> {
        let first = match initial {
            Some(v) => v,
            None => self.sample_momentum(rng)?,
        };
        let mut times = Vec::new();
        let mut momenta = vec![first];
        if self.rate > T::zero() {
            let clock = Exp::new(self.rate.as_f64()).expect("positive rate");
            let mut t = 0.0;
            loop {
                t += clock.sample(rng);
                if t >= t_end.as_f64() {
                    break;
                }
                times.push(T::of(t));
                momenta.push(self.sample_momentum(rng)?);
            }
        }
        Ok(JumpPath { energy: self.shell().energy, t_end, times, momenta })
    }

    /// `n_paths` independent paths; path i uses random stream i of `seed`.
    pub fn ensemble(&self, t_end: T, n_paths: usize, seed: u64) -> Result<Vec<JumpPath<T>>, KineticError> {
        (0..n_paths)
            .into_par_iter()
            .map(|i| self.path(t_end, &mut stream_rng(seed, i as u64), None))
            .collect()
    }
}

/// Ensemble shorthand: builds the process at energy e and simulates it.
pub fn simulate_jump_process<T: Real>(
    disp: Dispersion<T>,
    shell: ShellSpec<T>,
    t_end: T,
    n_paths: usize,
    seed: u64,
) -> Result<(JumpProcess<T>, Vec<JumpPath<T>>), KineticError> {
    let process = JumpProcess::new(disp, shell, crate::rng::split_seed(seed, 1))?;
    let paths = process.ensemble(t_end, n_paths, seed)?;
    Ok((process, paths))
}
