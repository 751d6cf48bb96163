use num_complex::Complex64;
use rayon::prelude::*;

use super::fft::FftPlan;
use super::lattice::TorusLattice;
use super::wave::WaveFunction;
use super::QuantumError;

/// Refuse to materialize phase-space fields with more cells than this.
pub const MAX_WIGNER_CELLS: usize = 1 << 27;

/// Phase-space grid of a Wigner field: half-lattice positions x = s/2 with
/// s ∈ {−L, …, L−2}^d (2L−1 per axis) times the momentum grid k/L.
///
/// Rescaled fields carry ε ≠ 1 and place position cells at X = εx.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct WignerGrid {
    pub lattice: TorusLattice,
    pub epsilon: f64,
}

impl WignerGrid {
    pub fn positions_per_axis(&self) -> usize {
        2 * self.lattice.side() - 1
    }

    pub fn positions(&self) -> usize {
        self.positions_per_axis().pow(self.lattice.dim() as u32)
    }

    pub fn momenta(&self) -> usize {
        self.lattice.sites()
    }

    pub fn cells(&self) -> usize {
        self.positions() * self.momenta()
    }

    /// Doubled position s = 2x of a position index.
    pub fn doubled_position(&self, mut index: usize) -> Vec<i64> {
        let n = self.positions_per_axis();
        let l = self.lattice.side() as i64;
        let mut s = vec![0; self.lattice.dim()];
        for c in s.iter_mut().rev() {
            *c = (index % n) as i64 - l;
            index /= n;
        }
        s
    }

    /// Physical position X = ε s / 2.
    pub fn position(&self, index: usize) -> Vec<f64> {
        self.doubled_position(index).into_iter().map(|s| self.epsilon * s as f64 / 2.0).collect()
    }

    pub fn momentum(&self, index: usize) -> Vec<f64> {
        self.lattice.momentum_coords(index)
    }

    /// Quadrature weight of one phase-space cell, ε^d L^{−d}.
    pub fn cell_measure(&self) -> f64 {
        self.epsilon.powi(self.lattice.dim() as i32) / self.lattice.sites() as f64
    }
}

/// Real phase-space density, stored position-major:
/// `values[pos * momenta + k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    pub grid: WignerGrid,
    pub values: Vec<f64>,
}

impl WignerField {
    pub fn get(&self, position: usize, momentum: usize) -> f64 {
        self.values[position * self.grid.momenta() + momentum]
    }

    /// Σ over cells of W times the cell measure; equals ‖ψ‖².
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_measure()
    }

    /// Σ_x W(x, v) (position counting measure); equals |ψ̂(v)|².
    pub fn momentum_marginal(&self) -> Vec<f64> {
        let m = self.grid.momenta();
        let scale = self.grid.epsilon.powi(self.grid.lattice.dim() as i32);
        let mut out = vec![0.0; m];
        for row in self.values.chunks(m) {
            out.iter_mut().zip(row).for_each(|(o, w)| *o += w * scale);
        }
        out
    }

    /// L^{−d} Σ_v W(x, v) at each position, times ε^d.
    pub fn position_marginal(&self) -> Vec<f64> {
        let m = self.grid.momenta();
        self.values.chunks(m).map(|row| row.iter().sum::<f64>() * self.grid.cell_measure()).collect()
    }
}

/// Lattice Wigner transform of ψ regarded as supported on the box
/// [−L/2, L/2)^d:
///
///   W(x, v) = Σ_{y+z=2x} conj ψ(z) ψ(y) e^{−2πi v·(y−z)}.
///
/// With counting measure on the half-lattice and L^{−d} on momenta, the
/// total mass is ‖ψ‖² and the position sum at fixed v is |ψ̂(v)|².
pub fn wigner(psi: &WaveFunction) -> Result<WignerField, QuantumError> {
    rescaled_wigner(psi, 1.0)
}

/// W^ε(X, V) = ε^{−d} W(X/ε, V) on positions X = εx.
pub fn rescaled_wigner(psi: &WaveFunction, epsilon: f64) -> Result<WignerField, QuantumError> {
    if !(epsilon > 0.0) {
        return Err(QuantumError::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let lattice = psi.lattice();
    let grid = WignerGrid { lattice, epsilon };
    if grid.cells() > MAX_WIGNER_CELLS {
        return Err(QuantumError::InvalidParameter(format!(
            "Wigner field with {} cells exceeds the limit {MAX_WIGNER_CELLS}",
            grid.cells()
        )));
    }
    let plan = FftPlan::new(lattice);
    let d = lattice.dim();
    let l = lattice.side() as i64;
    let m = lattice.sites();
    let amps = psi.amplitudes();
    let scale = epsilon.powi(-(d as i32));
    // (2k mod L) index per momentum, and momentum coordinates
    let doubled: Vec<usize> = (0..m)
        .map(|k| {
            let mut c = vec![0; d];
            lattice.coords(k, &mut c);
            let c2: Vec<usize> = c.iter().map(|&ci| (2 * ci) % lattice.side()).collect();
            lattice.index(&c2)
        })
        .collect();
    let moms: Vec<Vec<f64>> = (0..m).map(|k| lattice.momentum_coords(k)).collect();
    let mut values = vec![0.0; grid.cells()];
    values.par_chunks_mut(m).enumerate().for_each(|(pos, row)| {
        let s = grid.doubled_position(pos);
        let mut f = vec![Complex64::default(); m];
        let mut j = vec![0usize; d];
        let mut any = false;
        for (b, slot) in f.iter_mut().enumerate() {
            lattice.coords(b, &mut j);
            let mut y = vec![0i64; d];
            let mut z = vec![0i64; d];
            let mut inside = true;
            for a in 0..d {
                y[a] = j[a] as i64 - l / 2;
                z[a] = s[a] - y[a];
                if z[a] < -l / 2 || z[a] >= l / 2 {
                    inside = false;
                }
            }
            if inside {
                *slot = amps[lattice.index_signed(&z)].conj() * amps[lattice.index_signed(&y)];
                any = true;
            }
        }
        if !any {
            return;
        }
        plan.forward(&mut f);
        for (k, w) in row.iter_mut().enumerate() {
            let ph: f64 = moms[k].iter().zip(&s).map(|(v, &si)| v * si as f64).sum();
            *w = scale * (Complex64::from_polar(1.0, std::f64::consts::TAU * ph) * f[doubled[k]]).re;
        }
    });
    Ok(WignerField { grid, values })
}

/// Observable sampled on a Wigner grid in position form Õ(X, v).
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableKernel {
    pub grid: WignerGrid,
    pub values: Vec<f64>,
}

impl ObservableKernel {
    pub fn from_fn<F: Fn(&[f64], &[f64]) -> f64 + Sync>(grid: WignerGrid, f: F) -> Self {
        let m = grid.momenta();
        let moms: Vec<Vec<f64>> = (0..m).map(|k| grid.momentum(k)).collect();
        let mut values = vec![0.0; grid.cells()];
        values.par_chunks_mut(m).enumerate().for_each(|(pos, row)| {
            let x = grid.position(pos);
            for (k, o) in row.iter_mut().enumerate() {
                *o = f(&x, &moms[k]);
            }
        });
        Self { grid, values }
    }

    pub fn constant(grid: WignerGrid, c: f64) -> Self {
        Self { grid, values: vec![c; grid.cells()] }
    }
}

/// ⟨O, W⟩ = Σ_cells Õ(X, v) W(X, v) ε^d L^{−d}.
pub fn test_observable(w: &WignerField, o: &ObservableKernel) -> Result<f64, QuantumError> {
    if w.grid != o.grid || w.values.len() != o.values.len() {
        return Err(QuantumError::GridMismatch);
    }
    let s: f64 = w.values.par_iter().zip(o.values.par_iter()).map(|(a, b)| a * b).sum();
    Ok(s * w.grid.cell_measure())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn packet(l: usize) -> WaveFunction {
        let lat = TorusLattice::new(l, 2).unwrap();
        WaveFunction::gaussian_packet(lat, &[0.5, -1.0], 1.3, &[0.15, -0.3]).unwrap()
    }

    #[test]
    fn matches_direct_definition() {
        let psi = packet(8);
        let w = wigner(&psi).unwrap();
        let lat = psi.lattice();
        let a = psi.amplitudes();
        for (pos, k) in [(0usize, 0usize), (100, 17), (200, 63), (112, 5)] {
            let s = w.grid.doubled_position(pos);
            let v = lat.momentum_coords(k);
            let mut acc = Complex64::default();
            for y0 in -4i64..4 {
                for y1 in -4i64..4 {
                    let z0 = s[0] - y0;
                    let z1 = s[1] - y1;
                    if !(-4..4).contains(&z0) || !(-4..4).contains(&z1) {
                        continue;
                    }
                    let ph = v[0] * (y0 - z0) as f64 + v[1] * (y1 - z1) as f64;
                    acc += a[lat.index_signed(&[z0, z1])].conj()
                        * a[lat.index_signed(&[y0, y1])]
                        * Complex64::from_polar(1.0, -std::f64::consts::TAU * ph);
                }
            }
            assert!(acc.im.abs() < 1e-12);
            assert!((acc.re - w.get(pos, k)).abs() < 1e-12, "{pos} {k}");
        }
    }

    #[test]
    fn marginals_and_mass() {
        let psi = packet(8);
        let w = wigner(&psi).unwrap();
        assert!((w.mass() - 1.0).abs() < 1e-10);
        let plan = FftPlan::new(psi.lattice());
        let hat = psi.momentum(&plan);
        for (m, h) in w.momentum_marginal().iter().zip(&hat) {
            assert!((m - h.norm_sqr()).abs() < 1e-10);
        }
    }

    #[test]
    fn rescaling_keeps_mass() {
        let psi = packet(8);
        let w = rescaled_wigner(&psi, 0.25).unwrap();
        assert!((w.mass() - 1.0).abs() < 1e-10);
        let unscaled = wigner(&psi).unwrap();
        assert!((w.values[40] - 16.0 * unscaled.values[40]).abs() < 1e-10);
    }

    #[test]
    fn mismatched_grid_rejected() {
        let w = wigner(&packet(8)).unwrap();
        let o = ObservableKernel::constant(WignerGrid { epsilon: 0.5, ..w.grid }, 1.0);
        assert!(matches!(test_observable(&w, &o), Err(QuantumError::GridMismatch)));
    }
}
