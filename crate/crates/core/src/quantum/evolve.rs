use num_complex::Complex64;
use rayon::prelude::*;

use super::disorder::DisorderSample;
use super::fft::FftPlan;
use super::lattice::TorusLattice;
use super::wave::WaveFunction;
use super::QuantumError;

/// Bound on dt·(2d + λ max|V|) above which a step is refused.
pub const STEP_GUARD: f64 = 0.5;

/// Strang-split propagator for H = e(−i∇) + λV on a torus.
///
/// Each step applies the exact potential phase for half a step, the exact
/// kinetic phase e^{−i e(p) h} in momentum space, and the second potential
/// half-step; consecutive potential half-steps are merged.
#[derive(Debug, Clone)]
pub struct Evolver {
    plan: FftPlan,
    energies: Vec<f64>,
    potential: Vec<f64>,
    dt: f64,
}

impl Evolver {
    pub fn new(
        lattice: TorusLattice,
        disorder: Option<&DisorderSample>,
        lambda: f64,
        dt: f64,
    ) -> Result<Self, QuantumError> {
        if !(dt > 0.0) {
            return Err(QuantumError::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let potential = match disorder {
            Some(v) => {
                if v.values.len() != lattice.sites() {
                    return Err(QuantumError::LengthMismatch {
                        expected: lattice.sites(),
                        found: v.values.len(),
                    });
                }
                v.values.iter().map(|x| lambda * x).collect()
            }
            None => vec![0.0; lattice.sites()],
        };
        let vmax = potential.iter().fold(0.0f64, |m: f64, v: &f64| m.max(v.abs()));
        let bound = dt * (2.0 * lattice.dim() as f64 + vmax);
        if bound > STEP_GUARD {
            return Err(QuantumError::StepTooLarge { dt, bound });
        }
        Ok(Self { plan: FftPlan::new(lattice), energies: lattice.energies(), potential, dt })
    }

    pub fn plan(&self) -> &FftPlan {
        &self.plan
    }

    pub fn lattice(&self) -> TorusLattice {
        self.plan.lattice()
    }

    /// ψ_t for the given ψ₀. The step used is t/⌈t/dt⌉ ≤ dt.
    pub fn propagate(&self, psi: &WaveFunction, t: f64) -> Result<WaveFunction, QuantumError> {
        if !(t >= 0.0) {
            return Err(QuantumError::InvalidParameter(format!("t must be ≥ 0, got {t}")));
        }
        if psi.lattice() != self.lattice() {
            return Err(QuantumError::LatticeMismatch);
        }
        let mut out = psi.clone();
        if t == 0.0 {
            return Ok(out);
        }
        let steps = ((t / self.dt) - 1e-9).ceil().max(1.0) as usize;
        let h = t / steps as f64;
        let kin: Vec<Complex64> =
            self.energies.iter().map(|e| Complex64::from_polar(1.0, -e * h)).collect();
        let half: Vec<Complex64> =
            self.potential.iter().map(|v| Complex64::from_polar(1.0, -v * h / 2.0)).collect();
        let full: Vec<Complex64> = half.iter().map(|z| z * z).collect();
        out.update(|a| {
            mul(a, &half);
            for s in 0..steps {
                self.plan.forward(a);
                mul(a, &kin);
                self.plan.inverse(a);
                mul(a, if s + 1 == steps { &half } else { &full });
            }
        });
        Ok(out)
    }

    /// ψ at each of the increasing times, starting from ψ₀ at time 0.
    pub fn snapshots(
        &self,
        psi: &WaveFunction,
        times: &[f64],
    ) -> Result<Vec<WaveFunction>, QuantumError> {
        let mut out = Vec::with_capacity(times.len());
        let mut cur = psi.clone();
        let mut now = 0.0;
        for &t in times {
            if t < now {
                return Err(QuantumError::InvalidParameter("snapshot times must increase".into()));
            }
            cur = self.propagate(&cur, t - now)?;
            now = t;
            out.push(cur.clone());
        }
        Ok(out)
    }
}

fn mul(a: &mut [Complex64], b: &[Complex64]) {
    a.par_iter_mut().zip(b.par_iter()).for_each(|(x, y)| *x *= y);
}

/// One-shot evolution; see [`Evolver`].
pub fn evolve(
    psi0: &WaveFunction,
    disorder: Option<&DisorderSample>,
    lambda: f64,
    t: f64,
    dt: f64,
) -> Result<WaveFunction, QuantumError> {
    Evolver::new(psi0.lattice(), disorder, lambda, dt)?.propagate(psi0, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{sample_disorder, DisorderKind};

    #[test]
    fn free_eigenstate_acquires_phase() {
        let lat = TorusLattice::new(8, 3).unwrap();
        let mode = lat.index(&[1, 3, 6]);
        let e = lat.energies()[mode];
        let psi = WaveFunction::plane_wave(lat, mode);
        let out = evolve(&psi, None, 0.0, 2.7, 0.05).unwrap();
        let expect = psi.scaled(Complex64::from_polar(1.0, -e * 2.7));
        assert!(out.distance(&expect) < 1e-8);
    }

    #[test]
    fn unitary_and_composable() {
        let lat = TorusLattice::new(8, 3).unwrap();
        let v = sample_disorder(&lat, DisorderKind::Gaussian, 5);
        let psi = WaveFunction::gaussian_packet(lat, &[0.0; 3], 1.2, &[0.2, 0.0, 0.1]).unwrap();
        let ev = Evolver::new(lat, Some(&v), 0.3, 0.02).unwrap();
        let a = ev.propagate(&psi, 1.0).unwrap();
        assert!((a.amplitudes().iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-10);
        let b = ev.propagate(&ev.propagate(&psi, 0.4).unwrap(), 0.6).unwrap();
        assert!(a.distance(&b) < 1e-8);
    }

    #[test]
    fn large_step_refused() {
        let lat = TorusLattice::new(8, 3).unwrap();
        assert!(matches!(
            Evolver::new(lat, None, 0.0, 0.1),
            Err(QuantumError::StepTooLarge { .. })
        ));
    }
}
