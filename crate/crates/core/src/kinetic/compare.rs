//! Disorder-averaged quantum evolution against the jump process at matched
//! kinetic parameters: macroscopic time T = εt, position X = εx, with the
//! collision rate λ²/ε · 2πΦ(e) in kinetic time (ε = λ² by default).
//!
//! The momentum marginal of the rescaled Wigner field is the momentum
//! density L^{−d}|ψ̂|², and its |X|² moment is ε²Σ|x|²|ψ(x)|², so both are
//! read off ψ directly without materializing phase space.

use rayon::prelude::*;

use super::jump::JumpProcess;
use super::KineticError;
use crate::rng::{split_seed, stream_rng};
use crate::spectral::{default_width, phi_profile, Dispersion, ShellSpec};
use crate::stats::{total_variation, Estimate, Moments};
use crate::quantum::{sample_disorder, DisorderKind, Evolver, FftPlan, TorusLattice, WaveFunction};

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ComparisonSetup {
    pub side: usize,
    pub dim: usize,
    pub lambda: f64,
    /// Scale ε; defaults to λ².
    pub epsilon: Option<f64>,
    pub kinetic_time: f64,
    pub samples: usize,
    pub dt: f64,
    pub bins: usize,
    /// Target number of jump paths (every grid momentum gets at least one).
    pub paths: usize,
    pub disorder: DisorderKind,
    pub packet_width: f64,
    pub packet_momentum: Vec<f64>,
    pub seed: u64,
}

impl ComparisonSetup {
    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(self.lambda * self.lambda)
    }

    pub fn microscopic_time(&self) -> f64 {
        self.kinetic_time / self.epsilon()
    }

    pub fn lattice(&self) -> Result<TorusLattice, KineticError> {
        Ok(TorusLattice::new(self.side, self.dim)?)
    }

    pub fn initial_state(&self) -> Result<WaveFunction, KineticError> {
        Ok(WaveFunction::gaussian_packet(
            self.lattice()?,
            &vec![0.0; self.dim],
            self.packet_width,
            &self.packet_momentum,
        )?)
    }

    fn validate(&self) -> Result<(), KineticError> {
        if !(self.epsilon() > 0.0) {
            return Err(KineticError::InvalidParameter("scale ε must be positive".into()));
        }
        if !(self.kinetic_time >= 0.0) || self.bins == 0 || self.samples == 0 {
            return Err(KineticError::InvalidParameter(
                "need T ≥ 0, at least one bin and one sample".into(),
            ));
        }
        Ok(())
    }
}

/// Energy histogram over [0, 2d] of a momentum-grid density.
pub fn energy_histogram(energies: &[f64], weights: &[f64], band_max: f64, bins: usize) -> Vec<f64> {
    let mut h = vec![0.0; bins];
    for (&e, &w) in energies.iter().zip(weights) {
        let b = ((e / band_max) * bins as f64).floor().clamp(0.0, (bins - 1) as f64) as usize;
        h[b] += w;
    }
    h
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Observables {
    pub kinetic_time: f64,
    pub epsilon: f64,
    pub side: usize,
    pub bins: usize,
    pub energy_histogram: Vec<Estimate>,
    pub mean_velocity: Vec<Estimate>,
    pub second_moment: Estimate,
}

struct Snapshot {
    hist: Vec<f64>,
    velocity: Vec<f64>,
    second_moment: f64,
}

fn snapshot(psi: &WaveFunction, plan: &FftPlan, energies: &[f64], setup: &ComparisonSetup) -> Snapshot {
    let lat = psi.lattice();
    let rho = psi.momentum_density(plan);
    let band = 2.0 * lat.dim() as f64;
    let mut velocity = vec![0.0; lat.dim()];
    for (k, w) in rho.iter().enumerate() {
        for (v, p) in velocity.iter_mut().zip(lat.momentum_coords(k)) {
            *v += w * (std::f64::consts::TAU * p).sin();
        }
    }
    let eps = setup.epsilon();
    Snapshot {
        hist: energy_histogram(energies, &rho, band, setup.bins),
        velocity,
        second_moment: eps * eps * psi.second_moment(),
    }
}

/// Disorder-averaged observables of e^{−itH}ψ₀ at t = T/ε.
pub fn quantum_run(setup: &ComparisonSetup) -> Result<Observables, KineticError> {
    setup.validate()?;
    let lat = setup.lattice()?;
    let psi0 = setup.initial_state()?;
    let plan = FftPlan::new(lat);
    let energies = lat.energies();
    let t = setup.microscopic_time();
    let mut snaps = Vec::with_capacity(setup.samples);
    for i in 0..setup.samples {
        let v = sample_disorder(&lat, setup.disorder, split_seed(setup.seed, i as u64));
        let ev = Evolver::new(lat, Some(&v), setup.lambda, setup.dt)?;
        let psi = ev.propagate(&psi0, t)?;
        snaps.push(snapshot(&psi, &plan, &energies, setup));
    }
    let est = |f: &dyn Fn(&Snapshot) -> f64| snaps.iter().map(f).collect::<Moments>().estimate();
    Ok(Observables {
        kinetic_time: setup.kinetic_time,
        epsilon: setup.epsilon(),
        side: setup.side,
        bins: setup.bins,
        energy_histogram: (0..setup.bins).map(|b| est(&|s| s.hist[b])).collect(),
        mean_velocity: (0..lat.dim()).map(|a| est(&|s| s.velocity[a])).collect(),
        second_moment: est(&|s| s.second_moment),
    })
}

/// Linear interpolation of the jump rate 2πΦ(e) on [0, 2d].
#[derive(Debug, Clone)]
pub struct RateTable {
    band_max: f64,
    rates: Vec<f64>,
}

impl RateTable {
    pub fn build(disp: &Dispersion<f64>, nodes: usize, budget: u64, seed: u64) -> Self {
        let band_max = disp.band_max();
        let energies: Vec<f64> =
            (0..nodes).map(|i| band_max * i as f64 / (nodes - 1) as f64).collect();
        let rates = phi_profile(disp, &energies, default_width(disp), budget, seed)
            .iter()
            .map(|e| std::f64::consts::TAU * e.value)
            .collect();
        Self { band_max, rates }
    }

    pub fn eval(&self, e: f64) -> f64 {
        let n = self.rates.len() - 1;
        let x = (e / self.band_max * n as f64).clamp(0.0, n as f64);
        let i = (x.floor() as usize).min(n - 1);
        let f = x - i as f64;
        self.rates[i] * (1.0 - f) + self.rates[i + 1] * f
    }
}

const RATE_NODES: usize = 601;
const RATE_BUDGET: u64 = 1 << 24;
const SAMPLER_BUDGET: u64 = 1 << 26;

/// The jump process started from the momentum distribution of ψ₀.
///
/// Every grid momentum p with weight w_p = L^{−d}|ψ̂₀(p)|² > 0 starts
/// max(1, round(paths·w_p)) paths, each carrying weight w_p / (path count),
/// so the initial data match the quantum run exactly. Energy labels are
/// conserved, so the energy histogram is the initial one at every T.
pub fn boltzmann_run(setup: &ComparisonSetup) -> Result<Observables, KineticError> {
    setup.validate()?;
    let lat = setup.lattice()?;
    let psi0 = setup.initial_state()?;
    let plan = FftPlan::new(lat);
    let disp = Dispersion::<f64>::new(lat.dim());
    let weights = psi0.momentum_density(&plan);
    let energies = lat.energies();
    let coupling = setup.lambda * setup.lambda / setup.epsilon();
    let table = RateTable::build(&disp, RATE_NODES, RATE_BUDGET, split_seed(setup.seed, 99));
    let eps = setup.epsilon();
    let tk = setup.kinetic_time;
    let d = lat.dim();

    // (weight, velocity(T), X(T)) per path
    let paths: Vec<(f64, Vec<f64>, Vec<f64>)> = weights
        .par_iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(k, &w)| {
            let e = energies[k];
            let m = ((setup.paths as f64 * w).round() as usize).max(1);
            let v0 = lat.momentum_coords(k);
            let shell = ShellSpec::new(e, default_width(&disp), SAMPLER_BUDGET);
            let process = JumpProcess::with_rate(disp, shell, coupling * table.eval(e))?;
            let mut rng = stream_rng(setup.seed, k as u64);
            let mut out = Vec::with_capacity(m);
            for _ in 0..m {
                let path = process.path(tk, &mut rng, Some(v0.clone()))?;
                let mut vel = vec![0.0; d];
                disp.velocity(path.momentum_at(tk), &mut vel);
                out.push((w / m as f64, vel, path.position(&disp, tk)));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, KineticError>>()?
        .into_iter()
        .flatten()
        .collect();

    let weighted = |f: &dyn Fn(&(f64, Vec<f64>, Vec<f64>)) -> f64| -> Estimate {
        let mean: f64 = paths.iter().map(|p| p.0 * f(p)).sum();
        let total: f64 = paths.iter().map(|p| p.0).sum();
        let centre = mean / total;
        let var: f64 = paths.iter().map(|p| (p.0 * (f(p) - centre)).powi(2)).sum();
        Estimate { value: mean, stderr: var.sqrt(), n: paths.len() as u64 }
    };
    let x2 = psi0.second_moment();
    let mut x1 = vec![0.0; d];
    for (i, z) in psi0.amplitudes().iter().enumerate() {
        for (a, c) in lat.signed_coords(i).iter().enumerate() {
            x1[a] += *c as f64 * z.norm_sqr();
        }
    }
    let disp_sq = weighted(&|p| p.2.iter().map(|x| x * x).sum());
    let cross = weighted(&|p| p.2.iter().zip(&x1).map(|(x, c)| x * c).sum());
    let second_moment = Estimate {
        value: eps * eps * x2 + 2.0 * eps * cross.value + disp_sq.value,
        stderr: (2.0 * eps * cross.stderr).hypot(disp_sq.stderr),
        n: disp_sq.n,
    };
    let hist = energy_histogram(&energies, &weights, disp.band_max(), setup.bins);
    Ok(Observables {
        kinetic_time: tk,
        epsilon: eps,
        side: setup.side,
        bins: setup.bins,
        energy_histogram: hist.into_iter().map(Estimate::exact).collect(),
        mean_velocity: (0..d).map(|a| weighted(&|p| p.1[a])).collect(),
        second_moment,
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Discrepancy {
    pub observable: String,
    pub quantum: f64,
    pub boltzmann: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ComparisonReport {
    pub energy_tv: f64,
    pub rows: Vec<Discrepancy>,
}

fn relative(a: f64, b: f64, reference: f64) -> f64 {
    let diff = (a - b).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / reference.abs().max(f64::MIN_POSITIVE)
    }
}

/// Per-observable discrepancies between a quantum and a jump-process run.
///
/// Energy histograms are compared in total variation; velocity components
/// relative to the Boltzmann speed |E sin(2πv)|; the second moment relative
/// to its Boltzmann value.
pub fn kinetic_comparison(
    quantum: &Observables,
    boltzmann: &Observables,
) -> Result<ComparisonReport, KineticError> {
    if quantum.bins != boltzmann.bins
        || quantum.side != boltzmann.side
        || quantum.kinetic_time != boltzmann.kinetic_time
        || quantum.epsilon != boltzmann.epsilon
        || quantum.mean_velocity.len() != boltzmann.mean_velocity.len()
    {
        return Err(KineticError::GridMismatch);
    }
    let hq: Vec<f64> = quantum.energy_histogram.iter().map(|e| e.value).collect();
    let hb: Vec<f64> = boltzmann.energy_histogram.iter().map(|e| e.value).collect();
    let energy_tv = total_variation(&hq, &hb);
    let mut rows = vec![Discrepancy {
        observable: "energy_tv".into(),
        quantum: 0.0,
        boltzmann: 0.0,
        relative: energy_tv,
    }];
    let speed = boltzmann.mean_velocity.iter().map(|e| e.value * e.value).sum::<f64>().sqrt();
    for (a, (q, b)) in quantum.mean_velocity.iter().zip(&boltzmann.mean_velocity).enumerate() {
        rows.push(Discrepancy {
            observable: format!("velocity_{}", a + 1),
            quantum: q.value,
            boltzmann: b.value,
            relative: relative(q.value, b.value, speed),
        });
    }
    rows.push(Discrepancy {
        observable: "second_moment".into(),
        quantum: quantum.second_moment.value,
        boltzmann: boltzmann.second_moment.value,
        relative: relative(
            quantum.second_moment.value,
            boltzmann.second_moment.value,
            boltzmann.second_moment.value,
        ),
    });
    Ok(ComparisonReport { energy_tv, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(lambda: f64, epsilon: Option<f64>, t: f64) -> ComparisonSetup {
        ComparisonSetup {
            side: 16,
            dim: 3,
            lambda,
            epsilon,
            kinetic_time: t,
            samples: 2,
            dt: 0.05,
            bins: 20,
            paths: 2000,
            disorder: DisorderKind::Gaussian,
            packet_width: 1.5,
            packet_momentum: vec![0.2, 0.05, 0.0],
            seed: 3,
        }
    }

    #[test]
    fn identical_at_time_zero() {
        let s = setup(0.3, None, 0.0);
        let r = kinetic_comparison(&quantum_run(&s).unwrap(), &boltzmann_run(&s).unwrap()).unwrap();
        for row in &r.rows {
            assert!(row.relative < 1e-12, "{row:?}");
        }
    }

    #[test]
    fn collisionless_runs_agree() {
        let s = setup(0.0, Some(0.2), 0.4);
        let r = kinetic_comparison(&quantum_run(&s).unwrap(), &boltzmann_run(&s).unwrap()).unwrap();
        for row in &r.rows {
            assert!(row.relative < 1e-3, "{row:?}");
        }
    }

    #[test]
    fn mismatched_runs_rejected() {
        let s = setup(0.3, None, 0.0);
        let q = quantum_run(&s).unwrap();
        let mut b = q.clone();
        b.bins = 10;
        assert!(matches!(kinetic_comparison(&q, &b), Err(KineticError::GridMismatch)));
    }
}
