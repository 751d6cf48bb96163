use num_complex::Complex64;
use rayon::prelude::*;

use super::disorder::DisorderSample;
use super::fft::FftPlan;
use super::wave::WaveFunction;
use super::QuantumError;
use crate::quad::GaussLegendre;
use crate::spectral::RenormalizedDispersion;

pub const MAX_DUHAMEL_ORDER: usize = 3;
pub const DEFAULT_DUHAMEL_NODES: usize = 24;

/// Free generator used between collisions.
#[derive(Debug, Clone, Default)]
pub enum FreeSymbol {
    /// e(p); unitary.
    #[default]
    Bare,
    /// ω(p) = e(p) + λ²Θ(e(p)); damped.
    Renormalized(RenormalizedDispersion<f64>),
}

#[derive(Debug, Clone)]
pub struct DuhamelOptions {
    pub nodes: usize,
    pub free: FreeSymbol,
}

impl Default for DuhamelOptions {
    fn default() -> Self {
        Self { nodes: DEFAULT_DUHAMEL_NODES, free: FreeSymbol::Bare }
    }
}

struct Expansion<'a> {
    plan: FftPlan,
    symbol: Vec<Complex64>,
    potential: Vec<f64>,
    hat0: Vec<Complex64>,
    rule: &'a GaussLegendre,
}

impl Expansion<'_> {
    fn free(&self, hat: &mut [Complex64], tau: f64) {
        for (z, w) in hat.iter_mut().zip(&self.symbol) {
            *z *= (Complex64::new(0.0, -tau) * w).exp();
        }
    }

    /// χ_k(τ) in momentum space, with χ_0(τ) = e^{−iτH₀}ψ₀ and
    /// χ_k(τ) = −i∫_0^τ e^{−i(τ−s)H₀} λV χ_{k−1}(s) ds.
    fn chi(&self, k: usize, tau: f64, parallel: bool) -> Vec<Complex64> {
        if k == 0 {
            let mut hat = self.hat0.clone();
            self.free(&mut hat, tau);
            return hat;
        }
        let term = |(s, w): (f64, f64)| {
            let mut u = self.chi(k - 1, s, false);
            self.plan.inverse(&mut u);
            for (z, v) in u.iter_mut().zip(&self.potential) {
                *z *= *v;
            }
            self.plan.forward(&mut u);
            self.free(&mut u, tau - s);
            for z in u.iter_mut() {
                *z *= Complex64::new(0.0, -w);
            }
            u
        };
        let add = |mut a: Vec<Complex64>, b: Vec<Complex64>| {
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            a
        };
        let pairs: Vec<(f64, f64)> = self.rule.on(0.0, tau).collect();
        let zero = vec![Complex64::default(); self.hat0.len()];
        if parallel {
            let parts: Vec<Vec<Complex64>> = pairs.into_par_iter().map(term).collect();
            parts.into_iter().fold(zero, add)
        } else {
            pairs.into_iter().map(term).fold(zero, add)
        }
    }
}

/// ψ_k(t): the k-th term of the Duhamel expansion of e^{−itH}ψ₀ in powers
/// of λV around the free generator, by nested Gauss–Legendre quadrature on
/// the time simplex.
pub fn duhamel_term(
    k: usize,
    t: f64,
    disorder: &DisorderSample,
    lambda: f64,
    psi0: &WaveFunction,
    options: &DuhamelOptions,
) -> Result<WaveFunction, QuantumError> {
    Ok(duhamel_terms(k, t, disorder, lambda, psi0, options)?.pop().expect("k + 1 terms"))
}

/// ψ_0(t), …, ψ_k(t).
pub fn duhamel_terms(
    k: usize,
    t: f64,
    disorder: &DisorderSample,
    lambda: f64,
    psi0: &WaveFunction,
    options: &DuhamelOptions,
) -> Result<Vec<WaveFunction>, QuantumError> {
    if k > MAX_DUHAMEL_ORDER {
        return Err(QuantumError::OrderTooHigh { k, max: MAX_DUHAMEL_ORDER });
    }
    if options.nodes == 0 {
        return Err(QuantumError::InvalidParameter("quadrature needs at least one node".into()));
    }
    let lattice = psi0.lattice();
    if disorder.values.len() != lattice.sites() {
        return Err(QuantumError::LengthMismatch {
            expected: lattice.sites(),
            found: disorder.values.len(),
        });
    }
    let plan = FftPlan::new(lattice);
    let symbol: Vec<Complex64> = match &options.free {
        FreeSymbol::Bare => lattice.energies().into_iter().map(|e| Complex64::new(e, 0.0)).collect(),
        FreeSymbol::Renormalized(omega) => {
            if omega.dispersion().dim() != lattice.dim() {
                return Err(QuantumError::InvalidParameter(
                    "renormalized dispersion dimension differs from the lattice".into(),
                ));
            }
            (0..lattice.sites()).map(|p| omega.omega(&lattice.momentum_coords(p))).collect()
        }
    };
    let rule = GaussLegendre::new(options.nodes);
    let exp = Expansion {
        hat0: psi0.momentum(&plan),
        potential: disorder.values.iter().map(|v| lambda * v).collect(),
        plan,
        symbol,
        rule: &rule,
    };
    (0..=k)
        .map(|j| WaveFunction::from_momentum(&exp.plan, exp.chi(j, t, true)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{evolve, sample_disorder, DisorderKind, TorusLattice};

    fn setup() -> (TorusLattice, DisorderSample, WaveFunction) {
        let lat = TorusLattice::new(8, 3).unwrap();
        let v = sample_disorder(&lat, DisorderKind::Rademacher, 9);
        let psi = WaveFunction::gaussian_packet(lat, &[0.0; 3], 1.0, &[0.25, 0.0, 0.0]).unwrap();
        (lat, v, psi)
    }

    #[test]
    fn zeroth_term_is_free_evolution() {
        let (_, v, psi) = setup();
        let a = duhamel_term(0, 1.3, &v, 0.2, &psi, &DuhamelOptions::default()).unwrap();
        let b = evolve(&psi, None, 0.0, 1.3, 0.05).unwrap();
        assert!(a.distance(&b) < 1e-10);
    }

    #[test]
    fn homogeneous_in_lambda() {
        let (_, v, psi) = setup();
        let opts = DuhamelOptions { nodes: 8, ..Default::default() };
        let a = duhamel_term(2, 1.0, &v, 0.1, &psi, &opts).unwrap();
        let b = duhamel_term(2, 1.0, &v, 0.2, &psi, &opts).unwrap();
        assert!(a.scaled(Complex64::new(4.0, 0.0)).distance(&b) < 1e-12);
    }

    #[test]
    fn order_above_three_rejected() {
        let (_, v, psi) = setup();
        assert!(matches!(
            duhamel_term(4, 1.0, &v, 0.1, &psi, &DuhamelOptions::default()),
            Err(QuantumError::OrderTooHigh { .. })
        ));
    }
}
