use rayon::prelude::*;

use super::jump::JumpProcess;
use super::KineticError;
use crate::rng::stream_rng;
use crate::scalar::Real;
use crate::spectral::{phi, shell_average_vec, Dispersion, ShellSpec};
use crate::stats::{ks_test, linear_fit, normal_cdf, Estimate, KsOutcome, LinearFit, Moments};

/// Cutoffs shorter than this many mean waiting times are refused.
pub const MIN_CUTOFF_WAITS: f64 = 5.0;

/// d×d diffusion matrix with per-entry statistical errors, row-major.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DiffusionMatrix<T> {
    pub energy: T,
    pub dim: usize,
    pub entries: Vec<Estimate>,
}

impl<T: Real> DiffusionMatrix<T> {
    pub fn get(&self, i: usize, j: usize) -> Estimate {
        self.entries[i * self.dim + j]
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn diagonal(&self) -> Vec<Estimate> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn off_diagonal(&self) -> Vec<Estimate> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// Scalar D_e as the mean of the diagonal. The error treats the entries
    /// as independent.
    pub fn scalar(&self) -> Estimate {
        let diag = self.diagonal();
        let n = diag.len() as f64;
        Estimate {
            value: diag.iter().map(|e| e.value).sum::<f64>() / n,
            stderr: diag.iter().map(|e| e.stderr * e.stderr).sum::<f64>().sqrt() / n,
            n: diag.iter().map(|e| e.n).min().unwrap_or(0),
        }
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().map(|e| e.value).sum()
    }
}

/// D_ij = ⟨sin(2πv_i) sin(2πv_j)⟩_e / (2πΦ(e)) from thin-shell averages.
pub fn diffusion_closed_form<T: Real>(
    disp: &Dispersion<T>,
    shell: &ShellSpec<T>,
    seed: u64,
) -> Result<DiffusionMatrix<T>, KineticError> {
    let d = disp.dim();
    let num = shell_average_vec(
        disp,
        d * d,
        |v, out| {
            let s: Vec<f64> = v.iter().map(|&x| (T::two_pi() * x).sin().as_f64()).collect();
            for i in 0..d {
                for j in 0..d {
                    out[i * d + j] = s[i] * s[j];
                }
            }
        },
        shell,
        seed,
    )?;
    let rate = phi(disp, shell, crate::rng::split_seed(seed, 7)).scale(std::f64::consts::TAU);
    let entries = num.iter().map(|n| n.ratio(&rate)).collect();
    Ok(DiffusionMatrix { energy: shell.energy, dim: d, entries })
}

/// D_ij = ∫₀^∞ ⟨sin(2πv_i(t)) sin(2πv_j(0))⟩ dt, estimated as the ensemble
/// mean of sin(2πv_i(0)) X_j(T_cut) (symmetrized) with v(0) drawn from the
/// shell.
pub fn diffusion_autocorrelation<T: Real>(
    process: &JumpProcess<T>,
    t_cut: T,
    n_paths: usize,
    seed: u64,
) -> Result<DiffusionMatrix<T>, KineticError> {
    let mean_wait = process.mean_wait().as_f64();
    if t_cut.as_f64() < MIN_CUTOFF_WAITS * mean_wait {
        return Err(KineticError::CutoffTooShort { t_cut: t_cut.as_f64(), mean_wait });
    }
    let disp = *process.dispersion();
    let d = disp.dim();
    let samples: Vec<Vec<f64>> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let path = process.path(t_cut, &mut stream_rng(seed, i as u64), None)?;
            let mut s0 = vec![T::zero(); d];
            disp.velocity(&path.momenta[0], &mut s0);
            let x = path.position(&disp, t_cut);
            let mut out = vec![0.0; d * d];
            for a in 0..d {
                for b in 0..d {
                    out[a * d + b] =
                        0.5 * (s0[a] * x[b] + s0[b] * x[a]).as_f64();
                }
            }
            Ok(out)
        })
        .collect::<Result<_, KineticError>>()?;
    let entries = (0..d * d)
        .map(|k| samples.iter().map(|s| s[k]).collect::<Moments>().estimate())
        .collect();
    Ok(DiffusionMatrix { energy: process.shell().energy, dim: d, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MsdRow {
    pub time: f64,
    pub msd: Estimate,
    pub prediction: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MsdReport {
    pub rows: Vec<MsdRow>,
    pub fit: LinearFit,
    pub predicted_slope: f64,
    pub ks: KsOutcome,
}

impl MsdReport {
    pub fn slope_relative_error(&self) -> f64 {
        (self.fit.slope - self.predicted_slope).abs() / self.predicted_slope
    }
}

/// E|X(T)|² over an ensemble at each listed time, the linear fit against T,
/// and a Kolmogorov–Smirnov test of X₁ at the largest time against the
/// centred Gaussian whose variance is the exact finite-time value
/// 2D₁₁(T − (1 − e^{−rT})/r).
pub fn msd_diffusive_check<T: Real>(
    process: &JumpProcess<T>,
    diffusion: &DiffusionMatrix<T>,
    times: &[T],
    n_paths: usize,
    seed: u64,
) -> Result<MsdReport, KineticError> {
    if times.len() < 2 {
        return Err(KineticError::InvalidParameter("need at least two times".into()));
    }
    let t_max = times.iter().copied().fold(T::zero(), T::max);
    let disp = *process.dispersion();
    let per_path: Vec<(Vec<f64>, f64)> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let path = process.path(t_max, &mut stream_rng(seed, i as u64), None)?;
            let msd = times
                .iter()
                .map(|&t| path.position(&disp, t).iter().map(|x| (*x * *x).as_f64()).sum())
                .collect();
            Ok((msd, path.position(&disp, t_max)[0].as_f64()))
        })
        .collect::<Result<_, KineticError>>()?;
    let tr = diffusion.trace();
    let rows: Vec<MsdRow> = times
        .iter()
        .enumerate()
        .map(|(k, &t)| MsdRow {
            time: t.as_f64(),
            msd: per_path.iter().map(|(m, _)| m[k]).collect::<Moments>().estimate(),
            prediction: 2.0 * tr * t.as_f64(),
        })
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| r.time).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.msd.value).collect();
    let fit = linear_fit(&xs, &ys);
    let r = process.rate().as_f64();
    let tm = t_max.as_f64();
    let var = 2.0 * diffusion.get(0, 0).value * (tm - (1.0 - (-r * tm).exp()) / r);
    let sd = var.sqrt();
    let x1: Vec<f64> = per_path.iter().map(|(_, x)| x / sd).collect();
    let ks = ks_test(&x1, normal_cdf);
    Ok(MsdReport { rows, fit, predicted_slope: 2.0 * tr, ks })
}

/// Free-flight mean-square displacement ⟨|sin(2πv)|²⟩_e T² = r·tr(D)·T².
pub fn ballistic_prediction<T: Real>(diffusion: &DiffusionMatrix<T>, rate: f64, t: f64) -> f64 {
    rate * diffusion.trace() * t * t
}
