//! Thin-shell Monte Carlo for the co-area quantities Φ(e) and ⟨h⟩_e.
//!
//! Uniform torus points with |e(v) − e| < Δ/2 are distributed, as Δ → 0,
//! according to the normalized co-area measure δ(e − e(v))dv / Φ(e). The
//! same rejection sampler drives the Boltzmann jump process.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dispersion::Dispersion;
use super::SpectralError;
use crate::rng::stream_rng;
use crate::scalar::Real;
use crate::stats::{Estimate, Moments};

/// Uniform draws per independent random stream.
const CHUNK: u64 = 1 << 16;

/// An energy shell {v : |e(v) − energy| < width/2} with a sampling budget
/// (number of uniform torus draws).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellSpec<T> {
    pub energy: T,
    pub width: T,
    pub budget: u64,
}

impl<T: Real> ShellSpec<T> {
    pub fn new(energy: T, width: T, budget: u64) -> Self {
        assert!(width > T::zero(), "shell width must be positive");
        Self { energy, width, budget }
    }

    /// Shell with the default width Δ = 10⁻²·2d.
    pub fn with_default_width(disp: &Dispersion<T>, energy: T, budget: u64) -> Self {
        Self::new(energy, default_width(disp), budget)
    }

    pub fn contains(&self, e: T) -> bool {
        (e - self.energy).abs() < self.width * T::of(0.5)
    }

    /// True when the shell cannot intersect the band at all.
    fn outside_band(&self, disp: &Dispersion<T>) -> bool {
        let half = self.width * T::of(0.5);
        self.energy + half <= T::zero() || self.energy - half >= disp.band_max()
    }

    pub fn with_budget(self, budget: u64) -> Self {
        Self { budget, ..self }
    }

    pub fn with_width(self, width: T) -> Self {
        Self::new(self.energy, width, self.budget)
    }
}

pub fn default_width<T: Real>(disp: &Dispersion<T>) -> T {
    T::of(1e-2) * disp.band_max()
}

#[inline]
fn uniform_point<T: Real, R: Rng>(rng: &mut R, buf: &mut [T]) {
    for x in buf.iter_mut() {
        *x = T::of(rng.gen::<f64>() - 0.5);
    }
}

fn chunks(budget: u64) -> Vec<(u64, u64)> {
    (0..budget.div_ceil(CHUNK)).map(|i| (i, CHUNK.min(budget - i * CHUNK))).collect()
}

/// Thin-shell density of states Φ(e) ≈ vol{|e(v) − e| < Δ/2}/Δ.
///
/// Returns exactly zero (with zero error) when the shell misses the band.
pub fn phi<T: Real>(disp: &Dispersion<T>, shell: &ShellSpec<T>, seed: u64) -> Estimate {
    if shell.outside_band(disp) {
        return Estimate { value: 0.0, stderr: 0.0, n: shell.budget };
    }
    let hits: u64 = chunks(shell.budget)
        .into_par_iter()
        .map(|(stream, draws)| {
            let mut rng = stream_rng(seed, stream);
            let mut p = vec![T::zero(); disp.dim()];
            (0..draws)
                .filter(|_| {
                    uniform_point(&mut rng, &mut p);
                    shell.contains(disp.energy(&p))
                })
                .count() as u64
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    let n = shell.budget as f64;
    let frac = hits as f64 / n;
    let width = shell.width.as_f64();
    Estimate {
        value: frac / width,
        stderr: (frac * (1.0 - frac) / n).sqrt() / width,
        n: shell.budget,
    }
}

/// Φ on a list of energies from one shared pass of uniform draws.
pub fn phi_profile<T: Real>(
    disp: &Dispersion<T>,
    energies: &[T],
    width: T,
    budget: u64,
    seed: u64,
) -> Vec<Estimate> {
    let half = width * T::of(0.5);
    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&a, &b| energies[a].partial_cmp(&energies[b]).expect("finite energies"));
    let sorted: Vec<T> = order.iter().map(|&i| energies[i]).collect();
    let counts = chunks(budget)
        .into_par_iter()
        .map(|(stream, draws)| {
            let mut rng = stream_rng(seed, stream);
            let mut p = vec![T::zero(); disp.dim()];
            let mut local = vec![0u64; energies.len()];
            for _ in 0..draws {
                uniform_point(&mut rng, &mut p);
                let e = disp.energy(&p);
                let first = sorted.partition_point(|&target| target <= e - half);
                for (j, &target) in sorted.iter().enumerate().skip(first) {
                    if target - e >= half {
                        break;
                    }
                    if (e - target).abs() < half {
                        local[order[j]] += 1;
                    }
                }
            }
            local
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(vec![0u64; energies.len()], |mut acc, local| {
            acc.iter_mut().zip(local).for_each(|(a, b)| *a += b);
            acc
        });
    let n = budget as f64;
    let w = width.as_f64();
    counts
        .into_iter()
        .map(|c| {
            let frac = c as f64 / n;
            Estimate { value: frac / w, stderr: (frac * (1.0 - frac) / n).sqrt() / w, n: budget }
        })
        .collect()
}

/// Shell averages of the `m` components of a vector observable, all from
/// the same accepted samples. `f` writes the components for one point.
pub fn shell_average_vec<T, F>(
    disp: &Dispersion<T>,
    m: usize,
    f: F,
    shell: &ShellSpec<T>,
    seed: u64,
) -> Result<Vec<Estimate>, SpectralError>
where
    T: Real,
    F: Fn(&[T], &mut [f64]) + Sync,
{
    if shell.outside_band(disp) {
        return Err(SpectralError::EmptyShell { energy: shell.energy.as_f64() });
    }
    let moments = chunks(shell.budget)
        .into_par_iter()
        .map(|(stream, draws)| {
            let mut rng = stream_rng(seed, stream);
            let mut p = vec![T::zero(); disp.dim()];
            let mut vals = vec![0.0; m];
            let mut acc = vec![Moments::new(); m];
            for _ in 0..draws {
                uniform_point(&mut rng, &mut p);
                if shell.contains(disp.energy(&p)) {
                    f(&p, &mut vals);
                    acc.iter_mut().zip(&vals).for_each(|(a, &v)| a.push(v));
                }
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(vec![Moments::new(); m], |acc, local| {
            acc.into_iter().zip(local).map(|(a, b)| a.merge(b)).collect()
        });
    if moments.first().map_or(true, |mo| mo.count() == 0) {
        return Err(SpectralError::EmptyShell { energy: shell.energy.as_f64() });
    }
    Ok(moments.iter().map(Moments::estimate).collect())
}

/// ⟨h⟩_e by thin-shell rejection sampling.
pub fn shell_average<T, H>(
    disp: &Dispersion<T>,
    h: H,
    shell: &ShellSpec<T>,
    seed: u64,
) -> Result<Estimate, SpectralError>
where
    T: Real,
    H: Fn(&[T]) -> f64 + Sync,
{
    let est = shell_average_vec(disp, 1, |p, out| out[0] = h(p), shell, seed)?;
    Ok(est[0])
}

/// Draws single points from a shell by rejection from the torus.
#[derive(Debug, Clone, Copy)]
pub struct ShellSampler<T> {
    disp: Dispersion<T>,
    shell: ShellSpec<T>,
}

impl<T: Real> ShellSampler<T> {
    /// `shell.budget` bounds the number of uniform draws per sample.
    pub fn new(disp: Dispersion<T>, shell: ShellSpec<T>) -> Result<Self, SpectralError> {
        if shell.outside_band(&disp) {
            return Err(SpectralError::EmptyShell { energy: shell.energy.as_f64() });
        }
        Ok(Self { disp, shell })
    }

    pub fn dispersion(&self) -> &Dispersion<T> {
        &self.disp
    }

    pub fn shell(&self) -> &ShellSpec<T> {
        &self.shell
    }

    pub fn sample_into<R: Rng>(&self, rng: &mut R, out: &mut [T]) -> Result<(), SpectralError> {
        for _ in 0..self.shell.budget {
            uniform_point(rng, out);
            if self.shell.contains(self.disp.energy(out)) {
                return Ok(());
            }
        }
        Err(SpectralError::EmptyShell { energy: self.shell.energy.as_f64() })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<Vec<T>, SpectralError> {
        let mut p = vec![T::zero(); self.disp.dim()];
        self.sample_into(rng, &mut p)?;
        Ok(p)
    }
}
