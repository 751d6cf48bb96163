//! Two-propagator torus integrals controlling the ladder and crossing
//! estimates:
//!
//!   ladder:          λ² ∫ dp / (|α − ω̄(p) − iη| · |β − ω(±p + w) + iη|)
//!   two-denominator:    ∫ dp / (|α − ω̄(p) − iη| · |β − ω(p + w) + iη|)
//!
//! Both are midpoint grid sums over the d-torus.

use rayon::prelude::*;

use super::dispersion::axis_energy;
use super::theta::RenormalizedDispersion;
use super::SpectralError;
use crate::scalar::Real;

/// Orientation of the inner momentum in the second propagator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Orientation {
    Plus,
    Minus,
}

/// Fixed exponent used when checking the two-denominator bound
/// value·|w|·η^τ ≤ C.
pub const TWO_DENOMINATOR_TAU: f64 = 7.0 / 8.0;

fn check_shift<T: Real>(omega: &RenormalizedDispersion<T>, w: &[T]) -> Result<(), SpectralError> {
    let dim = omega.dispersion().dim();
    if w.len() != dim {
        return Err(SpectralError::InvalidParameter(format!(
            "shift has {} components, expected {dim}",
            w.len()
        )));
    }
    Ok(())
}

fn check_resolution<T: Real>(
    omega: &RenormalizedDispersion<T>,
    eta: T,
    n: usize,
) -> Result<(), SpectralError> {
    if !(eta > T::zero()) {
        return Err(SpectralError::InvalidParameter(format!("eta must be positive, got {eta:?}")));
    }
    let d = omega.dispersion().dim() as f64;
    // smallest denominator width: η plus the damping −Im ω at the band centre
    let width = eta.as_f64() - omega.of_energy(T::of(d)).im.as_f64();
    let spacing = std::f64::consts::TAU / n as f64;
    if spacing > width {
        return Err(SpectralError::ResolutionTooCoarse { spacing, scale: width });
    }
    Ok(())
}

/// Midpoint coordinates (k + ½)/n − ½ of one axis.
fn axis_coords(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| (k as f64 + 0.5) / n as f64 - 0.5)
}

/// Per-axis energies of p and of the shifted momentum ±p + w.
fn axis_tables<T: Real>(n: usize, w: &[T], orientation: Orientation) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let own: Vec<T> = axis_coords(n).map(|x| axis_energy(T::of(x))).collect();
    let shifted = w
        .iter()
        .map(|&dw| {
            axis_coords(n)
                .map(|x| {
                    let x = T::of(x);
                    axis_energy(match orientation {
                        Orientation::Plus => x + dw,
                        Orientation::Minus => dw - x,
                    })
                })
                .collect()
        })
        .collect();
    (vec![own; w.len()], shifted)
}

/// n^{−d} Σ_p f(e(p), e(±p + w)) over the midpoint grid.
fn pair_grid_sum<T, F>(n: usize, first: &[Vec<T>], second: &[Vec<T>], f: F) -> f64
where
    T: Real,
    F: Fn(T, T) -> f64 + Sync,
{
    fn walk<T: Real, F: Fn(T, T) -> f64>(
        axis: usize,
        ea: T,
        eb: T,
        first: &[Vec<T>],
        second: &[Vec<T>],
        f: &F,
    ) -> f64 {
        if axis == first.len() {
            return f(ea, eb);
        }
        first[axis]
            .iter()
            .zip(&second[axis])
            .map(|(&a, &b)| walk(axis + 1, ea + a, eb + b, first, second, f))
            .sum()
    }
    let sum: f64 = (0..n)
        .into_par_iter()
        .map(|k| walk(1, first[0][k], second[0][k], first, second, &f))
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    sum / (n as f64).powi(first.len() as i32)
}

fn denominators<T: Real>(
    omega: &RenormalizedDispersion<T>,
    alpha: T,
    beta: T,
    eta: T,
    e1: T,
    e2: T,
) -> f64 {
    let wp = omega.of_energy(e1);
    // |α − ω̄(p) − iη| = |α − ω(p) + iη|
    let a = num_complex::Complex::new(alpha - wp.re, eta - wp.im).norm();
    let wq = omega.of_energy(e2);
    let b = num_complex::Complex::new(beta - wq.re, eta - wq.im).norm();
    1.0 / (a.as_f64() * b.as_f64())
}

/// λ²∫dp / (|α − ω̄(p) − iη| |β − ω(±p + w) + iη|) on an n^d midpoint grid.
pub fn ladder_integral<T: Real>(
    omega: &RenormalizedDispersion<T>,
    alpha: T,
    beta: T,
    w: &[T],
    orientation: Orientation,
    eta: T,
    n: usize,
) -> Result<f64, SpectralError> {
    check_resolution(omega, eta, n)?;
    check_shift(omega, w)?;
    let lam2 = (omega.lambda() * omega.lambda()).as_f64();
    let (first, second) = axis_tables(n, w, orientation);
    let sum = pair_grid_sum(n, &first, &second, |e1, e2| denominators(omega, alpha, beta, eta, e1, e2));
    Ok(lam2 * sum)
}

/// ∫dp / (|α − ω̄(p) − iη| |β − ω(p + w) + iη|) on an n^d midpoint grid.
pub fn two_denominator_integral<T: Real>(
    omega: &RenormalizedDispersion<T>,
    alpha: T,
    beta: T,
    w: &[T],
    eta: T,
    n: usize,
) -> Result<f64, SpectralError> {
    check_resolution(omega, eta, n)?;
    check_shift(omega, w)?;
    let (first, second) = axis_tables(n, w, Orientation::Plus);
    Ok(pair_grid_sum(n, &first, &second, |e1, e2| denominators(omega, alpha, beta, eta, e1, e2)))
}

/// value · |w|_crit · η^τ with τ = 7/8; bounded under the two-denominator
/// estimate.
pub fn two_denominator_bound_ratio<T: Real>(
    omega: &RenormalizedDispersion<T>,
    value: f64,
    w: &[T],
    eta: T,
) -> f64 {
    let dist = omega.dispersion().critical_distance(w).as_f64();
    value * dist * eta.as_f64().powf(TWO_DENOMINATOR_TAU)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Dispersion;

    #[test]
    fn ladder_symmetric_under_swap() {
        let disp = Dispersion::<f64>::new(3);
        let omega = RenormalizedDispersion::new(disp, 0.5, 0.02).unwrap();
        let eta = 0.5f64.powf(2.5);
        let w = [0.07, -0.13, 0.21];
        let mw = w.map(|x| -x);
        for orientation in [Orientation::Plus, Orientation::Minus] {
            let a = ladder_integral(&omega, 2.7, 3.4, &w, orientation, eta, 48).unwrap();
            let b = ladder_integral(&omega, 3.4, 2.7, &mw, orientation, eta, 48).unwrap();
            assert!((a - b).abs() < 1e-4 * a, "{orientation:?}: {a} vs {b}");
        }
    }

    #[test]
    fn off_shell_bounded() {
        let disp = Dispersion::<f64>::new(3);
        let omega = RenormalizedDispersion::bare(disp);
        for (a, b) in [(-2.0, 8.0), (9.0, -3.5), (7.5, 7.5)] {
            let v = two_denominator_integral(&omega, a, b, &[0.1, 0.2, 0.0], 1.0, 16).unwrap();
            assert!(v <= 4.0, "{v}");
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let omega = RenormalizedDispersion::bare(Dispersion::<f64>::new(3));
        let r = two_denominator_integral(&omega, 3.0, 3.0, &[0.1, 0.0, 0.0], 0.01, 64);
        assert!(matches!(r, Err(SpectralError::ResolutionTooCoarse { .. })));
    }
}
