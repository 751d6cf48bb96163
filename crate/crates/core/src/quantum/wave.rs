use num_complex::Complex64;

use super::fft::FftPlan;
use super::lattice::TorusLattice;
use super::QuantumError;

/// Complex amplitudes over the sites of a torus, with a cached ℓ² norm.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    lattice: TorusLattice,
    amplitudes: Vec<Complex64>,
    norm: f64,
}

fn l2(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl WaveFunction {
    pub fn from_amplitudes(
        lattice: TorusLattice,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self, QuantumError> {
        if amplitudes.len() != lattice.sites() {
            return Err(QuantumError::LengthMismatch {
                expected: lattice.sites(),
                found: amplitudes.len(),
            });
        }
        let norm = l2(&amplitudes);
        Ok(Self { lattice, amplitudes, norm })
    }

    pub fn zeros(lattice: TorusLattice) -> Self {
        Self { lattice, amplitudes: vec![Complex64::default(); lattice.sites()], norm: 0.0 }
    }

    /// Amplitudes from momentum-space values ψ̂ (inverse of [`Self::momentum`]).
    pub fn from_momentum(plan: &FftPlan, mut hat: Vec<Complex64>) -> Result<Self, QuantumError> {
        if hat.len() != plan.lattice().sites() {
            return Err(QuantumError::LengthMismatch {
                expected: plan.lattice().sites(),
                found: hat.len(),
            });
        }
        plan.inverse(&mut hat);
        Self::from_amplitudes(plan.lattice(), hat)
    }

    /// Normalized plane wave e^{2πi p·x} L^{−d/2}, p = k/L for the given
    /// momentum index.
    pub fn plane_wave(lattice: TorusLattice, mode: usize) -> Self {
        let p = lattice.momentum_coords(mode);
        let amp = (lattice.sites() as f64).powf(-0.5);
        let amplitudes: Vec<Complex64> = (0..lattice.sites())
            .map(|x| {
                let xs = lattice.signed_coords(x);
                let ph: f64 = p.iter().zip(&xs).map(|(a, &b)| a * b as f64).sum();
                Complex64::from_polar(amp, std::f64::consts::TAU * ph)
            })
            .collect();
        let norm = l2(&amplitudes);
        Self { lattice, amplitudes, norm }
    }

    pub fn point_mass(lattice: TorusLattice, site: usize) -> Self {
        let mut amplitudes = vec![Complex64::default(); lattice.sites()];
        amplitudes[site] = Complex64::new(1.0, 0.0);
        Self { lattice, amplitudes, norm: 1.0 }
    }

    /// Normalized Gaussian packet exp(−|x − x₀|²/(4σ²)) e^{2πi p₀·x}, with
    /// x − x₀ taken as the minimal torus displacement.
    pub fn gaussian_packet(
        lattice: TorusLattice,
        center: &[f64],
        width: f64,
        p0: &[f64],
    ) -> Result<Self, QuantumError> {
        if center.len() != lattice.dim() || p0.len() != lattice.dim() {
            return Err(QuantumError::InvalidParameter(
                "packet centre and momentum must have the lattice dimension".into(),
            ));
        }
        if !(width > 0.0) {
            return Err(QuantumError::InvalidParameter(format!(
                "packet width must be positive, got {width}"
            )));
        }
        let l = lattice.side() as f64;
        let amplitudes: Vec<Complex64> = (0..lattice.sites())
            .map(|x| {
                let xs = lattice.signed_coords(x);
                let mut r2 = 0.0;
                let mut ph = 0.0;
                for ((&xi, &ci), &pi) in xs.iter().zip(center).zip(p0) {
                    let dx = xi as f64 - ci;
                    let dx = dx - l * (dx / l).round();
                    r2 += dx * dx;
                    ph += pi * xi as f64;
                }
                Complex64::from_polar((-r2 / (4.0 * width * width)).exp(), std::f64::consts::TAU * ph)
            })
            .collect();
        let n = l2(&amplitudes);
        let amplitudes: Vec<Complex64> = amplitudes.into_iter().map(|z| z / n).collect();
        let norm = l2(&amplitudes);
        Ok(Self { lattice, amplitudes, norm })
    }

    pub fn lattice(&self) -> TorusLattice {
        self.lattice
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// Replaces the amplitudes and refreshes the cached norm.
    pub fn update<F: FnOnce(&mut [Complex64])>(&mut self, f: F) {
        f(&mut self.amplitudes);
        self.norm = l2(&self.amplitudes);
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn norm_sqr(&self) -> f64 {
        self.norm * self.norm
    }

    /// ψ̂(p) = Σ_x e^{−2πi p·x} ψ(x).
    pub fn momentum(&self, plan: &FftPlan) -> Vec<Complex64> {
        let mut hat = self.amplitudes.clone();
        plan.forward(&mut hat);
        hat
    }

    /// L^{−d}|ψ̂(p)|², summing to ‖ψ‖².
    pub fn momentum_density(&self, plan: &FftPlan) -> Vec<f64> {
        let scale = 1.0 / self.lattice.sites() as f64;
        self.momentum(plan).iter().map(|z| z.norm_sqr() * scale).collect()
    }

    pub fn position_density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Σ_x |x|² |ψ(x)|² in signed coordinates.
    pub fn second_moment(&self) -> f64 {
        self.lattice
            .radius_squared()
            .iter()
            .zip(&self.amplitudes)
            .map(|(r2, z)| r2 * z.norm_sqr())
            .sum()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// ‖self − other‖.
    pub fn distance(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn add_scaled(&mut self, c: Complex64, other: &Self) {
        self.update(|a| a.iter_mut().zip(&other.amplitudes).for_each(|(x, y)| *x += c * y));
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let amplitudes: Vec<Complex64> = self.amplitudes.iter().map(|z| z * c).collect();
        let norm = l2(&amplitudes);
        Self { lattice: self.lattice, norm, amplitudes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stored_norm_tracks_amplitudes() {
        let lat = TorusLattice::new(8, 2).unwrap();
        let mut psi =
            WaveFunction::gaussian_packet(lat, &[0.0, 0.0], 1.5, &[0.2, -0.1]).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        psi.update(|a| a[3] += Complex64::new(0.5, 0.0));
        assert!((psi.norm() - l2(psi.amplitudes())).abs() < 1e-12);
        let twice = psi.scaled(Complex64::new(0.0, 2.0));
        assert!((twice.norm() - l2(twice.amplitudes())).abs() < 1e-12);
    }

    #[test]
    fn plane_wave_is_single_mode() {
        let lat = TorusLattice::new(8, 3).unwrap();
        let plan = FftPlan::new(lat);
        let mode = lat.index(&[1, 7, 2]);
        let rho = WaveFunction::plane_wave(lat, mode).momentum_density(&plan);
        assert!((rho[mode] - 1.0).abs() < 1e-12);
        assert!(rho.iter().sum::<f64>() - 1.0 < 1e-12);
    }
}
