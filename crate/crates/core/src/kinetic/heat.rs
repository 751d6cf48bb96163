use super::diffusion::DiffusionMatrix;
use super::KineticError;
use crate::scalar::Real;

/// Solution of ∂_T f = ∇·D∇f with a unit point mass at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatSolution<T> {
    dim: usize,
    /// symmetrized D, row-major
    matrix: Vec<f64>,
    time: T,
    /// Cholesky factor of the covariance 2DT, when positive definite
    chol: Option<Vec<f64>>,
}

fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum();
            if i == j {
                let d = a[i * n + i] - s;
                if d <= 0.0 {
                    return None;
                }
                l[i * n + i] = d.sqrt();
            } else {
                l[i * n + j] = (a[i * n + j] - s) / l[j * n + j];
            }
        }
    }
    Some(l)
}

impl<T: Real> HeatSolution<T> {
    pub fn new(diffusion: &DiffusionMatrix<T>, time: T) -> Result<Self, KineticError> {
        Self::from_values(diffusion.dim, &diffusion.values(), time)
    }

    pub fn from_values(dim: usize, d: &[f64], time: T) -> Result<Self, KineticError> {
        if d.len() != dim * dim {
            return Err(KineticError::InvalidParameter("diffusion matrix must be d×d".into()));
        }
        if !(time > T::zero()) {
            return Err(KineticError::InvalidParameter(format!("T must be positive, got {time:?}")));
        }
        let mut m = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                m[i * dim + j] = 0.5 * (d[i * dim + j] + d[j * dim + i]);
            }
        }
        // D + δ·I positive definite for every δ > 0 ⟺ D positive semidefinite
        let scale = m.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(f64::MIN_POSITIVE);
        let mut shifted = m.clone();
        for i in 0..dim {
            shifted[i * dim + i] += 1e-12 * scale;
        }
        if cholesky(&shifted, dim).is_none() {
            return Err(KineticError::NotPsd);
        }
        let cov: Vec<f64> = m.iter().map(|x| 2.0 * x * time.as_f64()).collect();
        Ok(Self { dim, matrix: m, time, chol: cholesky(&cov, dim) })
    }

    pub fn time(&self) -> T {
        self.time
    }

    /// exp(−(2π)² T ⟨ξ, Dξ⟩).
    pub fn fourier(&self, xi: &[T]) -> T {
        let mut q = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                q += xi[i].as_f64() * self.matrix[i * self.dim + j] * xi[j].as_f64();
            }
        }
        T::of((-(std::f64::consts::TAU.powi(2)) * self.time.as_f64() * q).exp())
    }

    /// Gaussian density with covariance 2DT; `NotPsd` when that covariance is
    /// singular.
    pub fn density(&self, x: &[T]) -> Result<T, KineticError> {
        let l = self.chol.as_ref().ok_or(KineticError::NotPsd)?;
        let n = self.dim;
        // solve L y = x
        let mut y = vec![0.0; n];
        for i in 0..n {
            let s: f64 = (0..i).map(|k| l[i * n + k] * y[k]).sum();
            y[i] = (x[i].as_f64() - s) / l[i * n + i];
        }
        let logdet: f64 = (0..n).map(|i| l[i * n + i].ln()).sum();
        let q: f64 = y.iter().map(|v| v * v).sum();
        let norm = (std::f64::consts::TAU).powf(-(n as f64) / 2.0);
        Ok(T::of(norm * (-0.5 * q - logdet).exp()))
    }

    /// Covariance 2DT, row-major.
    pub fn covariance(&self) -> Vec<f64> {
        self.matrix.iter().map(|x| 2.0 * x * self.time.as_f64()).collect()
    }
}

/// Fourier multiplier exp(−(2π)² T ⟨ξ, Dξ⟩) in one call.
pub fn heat_kernel<T: Real>(diffusion: &DiffusionMatrix<T>, time: T, xi: &[T]) -> Result<T, KineticError> {
    Ok(HeatSolution::new(diffusion, time)?.fourier(xi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussLegendre;

    fn scalar(d: f64) -> Vec<f64> {
        vec![d, 0.0, 0.0, 0.0, d, 0.0, 0.0, 0.0, d]
    }

    #[test]
    fn mass_and_semigroup() {
        let a = HeatSolution::<f64>::from_values(3, &scalar(0.3), 1.2).unwrap();
        let b = HeatSolution::from_values(3, &scalar(0.3), 0.7).unwrap();
        let c = HeatSolution::from_values(3, &scalar(0.3), 1.9).unwrap();
        assert_eq!(a.fourier(&[0.0, 0.0, 0.0]), 1.0);
        let xi = [0.13, -0.4, 0.2];
        assert!((a.fourier(&xi) * b.fourier(&xi) - c.fourier(&xi)).abs() < 1e-12);
    }

    #[test]
    fn one_dimensional_variance() {
        let h = HeatSolution::from_values(1, &[0.4], 2.0).unwrap();
        let gl = GaussLegendre::new(64);
        let mass = gl.integrate(-12.0, 12.0, |x| h.density(&[x]).unwrap());
        let var = gl.integrate(-12.0, 12.0, |x| x * x * h.density(&[x]).unwrap());
        assert!((mass - 1.0).abs() < 1e-10);
        assert!((var - 2.0 * 0.4 * 2.0).abs() < 1e-10);
    }

    #[test]
    fn indefinite_matrix_rejected() {
        let r = HeatSolution::from_values(2, &[1.0, 2.0, 2.0, 1.0], 1.0);
        assert!(matches!(r, Err(KineticError::NotPsd)));
        let semi = HeatSolution::<f64>::from_values(2, &[1.0, 0.0, 0.0, 0.0], 1.0).unwrap();
        assert!(semi.density(&[0.0, 0.0]).is_err());
        assert!((semi.fourier(&[0.0, 3.0]) - 1.0).abs() < 1e-15);
    }
}
