//! The self-energy Θ_ε(α) = ∫ dq / (α − e(q) + iε) and the renormalized
//! dispersion ω(p) = e(p) + λ²Θ(e(p)).
//!
//! The torus integral is a midpoint grid sum over the first d − 1 axes; the
//! last axis is integrated exactly,
//!
//!   ∫₀¹ dq / (w + cos 2πq) = 1 / (√(w−1)·√(w+1)),   Im w > 0,
//!
//! with principal square roots (the product has its cut on [−1, 1] only).
//! Grid points are reduced by the q → 1 − q and axis-permutation
//! symmetries, so the work per α is about (n/2)^(d−1)/(d−1)!.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use rayon::prelude::*;

use super::dispersion::Dispersion;
use super::SpectralError;
use crate::scalar::Real;

/// A value Θ_ε(α). `value.im ≤ 0` for every ε > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfEnergy<T> {
    pub alpha: T,
    pub epsilon: T,
    pub value: Complex<T>,
}

/// Smallest even per-axis resolution whose energy spacing 2π/n is below ε/4.
pub fn default_resolution(epsilon: f64) -> usize {
    let n = (4.0 * std::f64::consts::TAU / epsilon).ceil() as usize + 1;
    n + n % 2
}

/// Precomputed partial-energy multiset for repeated Θ_ε evaluations.
#[derive(Debug, Clone)]
pub struct ThetaGrid<T> {
    dim: usize,
    epsilon: T,
    resolution: usize,
    /// (sum of the first d − 1 axis energies, weight)
    partial: Vec<(T, f64)>,
}

impl<T: Real> ThetaGrid<T> {
    pub fn new(dim: usize, epsilon: T, resolution: Option<usize>) -> Result<Self, SpectralError> {
        if !(epsilon > T::zero()) {
            return Err(SpectralError::InvalidParameter(format!(
                "epsilon must be positive, got {epsilon:?}"
            )));
        }
        let eps = epsilon.as_f64();
        let n = match (dim, resolution) {
            (_, Some(n)) => n,
            (0 | 1, None) => 2,
            _ => default_resolution(eps),
        };
        if n < 2 || n % 2 != 0 {
            return Err(SpectralError::InvalidParameter(format!(
                "theta resolution must be even and ≥ 2, got {n}"
            )));
        }
        let spacing = std::f64::consts::TAU / n as f64;
        if dim > 1 && spacing > eps {
            return Err(SpectralError::ResolutionTooCoarse { spacing, scale: eps });
        }
        let half = n / 2;
        let nodes = multiset_count(half, dim.saturating_sub(1));
        if nodes > MAX_THETA_NODES as f64 {
            return Err(SpectralError::InvalidParameter(format!(
                "theta grid would need {nodes:.3e} nodes (max {MAX_THETA_NODES}); raise epsilon"
            )));
        }
        let axis: Vec<f64> = (0..half)
            .map(|k| 1.0 - (std::f64::consts::TAU * (k as f64 + 0.5) / n as f64).cos())
            .collect();
        let w = 2.0 / n as f64;
        let mut partial = Vec::new();
        let mut idx = Vec::with_capacity(dim.saturating_sub(1));
        enumerate_multisets(&axis, w, dim.saturating_sub(1), 0, &mut idx, &mut partial);
        Ok(Self { dim, epsilon, resolution: n, partial })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, alpha: T) -> Complex<T> {
        let shift = Complex::new(alpha.as_f64() - 1.0, self.epsilon.as_f64());
        let one = Complex::new(1.0, 0.0);
        let mut acc = Complex::new(0.0f64, 0.0);
        for &(u, weight) in &self.partial {
            let w = shift - u.as_f64();
            acc += weight / ((w - one).sqrt() * (w + one).sqrt());
        }
        Complex::new(T::of(acc.re), T::of(acc.im))
    }
}

/// Largest reduced Θ grid, in partial-energy nodes.
pub const MAX_THETA_NODES: usize = 1 << 26;

/// C(m + depth − 1, depth).
fn multiset_count(m: usize, depth: usize) -> f64 {
    (0..depth).map(|i| (m + i) as f64 / (i + 1) as f64).product()
}

/// Nondecreasing index tuples of length `depth`, each weighted by the
/// number of orderings it represents.
fn enumerate_multisets<T: Real>(
    axis: &[f64],
    w: f64,
    depth: usize,
    start: usize,
    idx: &mut Vec<usize>,
    out: &mut Vec<(T, f64)>,
) {
    if idx.len() == depth {
        let sum: f64 = idx.iter().map(|&i| axis[i]).sum();
        out.push((T::of(sum), w.powi(depth as i32) * orderings(idx)));
        return;
    }
    for i in start..axis.len() {
        idx.push(i);
        enumerate_multisets(axis, w, depth, i, idx, out);
        idx.pop();
    }
}

/// Multinomial count of distinct permutations of a sorted index tuple.
fn orderings(sorted: &[usize]) -> f64 {
    let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    let mut denom = 1.0;
    let mut run = 1;
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            run += 1;
        } else {
            denom *= fact(run);
            run = 1;
        }
    }
    denom *= fact(run);
    fact(sorted.len()) / denom
}

/// Θ_ε(α) on the d-torus.
pub fn theta<T: Real>(
    alpha: T,
    epsilon: T,
    dim: usize,
    resolution: Option<usize>,
) -> Result<SelfEnergy<T>, SpectralError> {
    let grid = ThetaGrid::new(dim, epsilon, resolution)?;
    Ok(SelfEnergy { alpha, epsilon, value: grid.eval(alpha) })
}

type TableKey = (usize, u64, usize, Option<usize>);

/// Tables depend only on (d, ε, nodes, resolution) and are expensive.
static TABLE_CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<Vec<Complex<f64>>>>>> = OnceLock::new();

/// Θ_ε tabulated on [0, 2d] for fast lookup at e(p), linear interpolation.
#[derive(Debug, Clone)]
pub struct SelfEnergyTable<T> {
    lo: T,
    step: T,
    values: Vec<Complex<T>>,
    epsilon: T,
}

impl<T: Real> SelfEnergyTable<T> {
    /// `points` table nodes spanning the band of `disp`.
    pub fn build(
        disp: &Dispersion<T>,
        epsilon: T,
        points: usize,
        resolution: Option<usize>,
    ) -> Result<Self, SpectralError> {
        assert!(points >= 2);
        let lo = T::zero();
        let step = disp.band_max() / T::of((points - 1) as f64);
        let key = (disp.dim(), epsilon.as_f64().to_bits(), points, resolution);
        let cache = TABLE_CACHE.get_or_init(Default::default);
        let cached = cache.lock().expect("table cache").get(&key).cloned();
        let raw = match cached {
            Some(v) => v,
            None => {
                let grid = ThetaGrid::new(disp.dim(), epsilon, resolution)?;
                let v: Arc<Vec<Complex<f64>>> = Arc::new(
                    (0..points)
                        .into_par_iter()
                        .map(|i| {
                            let z = grid.eval(lo + step * T::of(i as f64));
                            Complex::new(z.re.as_f64(), z.im.as_f64())
                        })
                        .collect(),
                );
                cache.lock().expect("table cache").insert(key, v.clone());
                v
            }
        };
        let values = raw.iter().map(|z| Complex::new(T::of(z.re), T::of(z.im))).collect();
        Ok(Self { lo, step, values, epsilon })
    }

    /// Table with node spacing ε/4 (at least 64 nodes).
    pub fn for_epsilon(disp: &Dispersion<T>, epsilon: T) -> Result<Self, SpectralError> {
        let span = disp.band_max().as_f64();
        let points = ((span / (epsilon.as_f64() / 4.0)).ceil() as usize + 1).max(64);
        Self::build(disp, epsilon, points, None)
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn eval(&self, e: T) -> Complex<T> {
        let last = self.values.len() - 1;
        let x = ((e - self.lo) / self.step).max(T::zero());
        let i = x.floor().to_usize().unwrap_or(last).min(last);
        if i == last {
            return self.values[last];
        }
        let frac = x - T::of(i as f64);
        self.values[i] * (T::one() - frac) + self.values[i + 1] * frac
    }
}

/// ω(p) = e(p) + λ²Θ_ε(e(p)) backed by a [`SelfEnergyTable`]. With λ = 0
/// no table is built and ω = e exactly.
#[derive(Debug, Clone)]
pub struct RenormalizedDispersion<T> {
    disp: Dispersion<T>,
    lambda: T,
    table: Option<SelfEnergyTable<T>>,
}

impl<T: Real> RenormalizedDispersion<T> {
    pub fn new(disp: Dispersion<T>, lambda: T, epsilon: T) -> Result<Self, SpectralError> {
        if lambda < T::zero() {
            return Err(SpectralError::InvalidParameter(format!("lambda must be ≥ 0, got {lambda:?}")));
        }
        let table = if lambda == T::zero() {
            None
        } else {
            Some(SelfEnergyTable::for_epsilon(&disp, epsilon)?)
        };
        Ok(Self { disp, lambda, table })
    }

    /// The bare dispersion, ω = e.
    pub fn bare(disp: Dispersion<T>) -> Self {
        Self { disp, lambda: T::zero(), table: None }
    }

    pub fn with_table(disp: Dispersion<T>, lambda: T, table: SelfEnergyTable<T>) -> Self {
        Self { disp, lambda, table: Some(table) }
    }

    pub fn dispersion(&self) -> &Dispersion<T> {
        &self.disp
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn of_energy(&self, e: T) -> Complex<T> {
        match &self.table {
            Some(t) => Complex::new(e, T::zero()) + t.eval(e) * (self.lambda * self.lambda),
            None => Complex::new(e, T::zero()),
        }
    }

    pub fn omega(&self, p: &[T]) -> Complex<T> {
        self.of_energy(self.disp.energy(p))
    }
}

/// ω(p) = e(p) + λ²Θ_ε(e(p)) evaluated directly (no table).
pub fn renormalized_dispersion<T: Real>(
    disp: &Dispersion<T>,
    p: &[T],
    lambda: T,
    epsilon: T,
    resolution: Option<usize>,
) -> Result<Complex<T>, SpectralError> {
    if lambda < T::zero() {
        return Err(SpectralError::InvalidParameter(format!("lambda must be ≥ 0, got {lambda:?}")));
    }
    let e = disp.energy(p);
    if lambda == T::zero() {
        return Ok(Complex::new(e, T::zero()));
    }
    let th = theta(e, epsilon, disp.dim(), resolution)?;
    Ok(Complex::new(e, T::zero()) + th.value * (lambda * lambda))
}
