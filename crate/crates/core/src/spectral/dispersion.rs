//! The nearest-neighbour lattice dispersion e(p) = Σᵢ (1 − cos 2πpᵢ) on the
//! unit torus [-1/2, 1/2)^d.

use crate::scalar::Real;

/// Lattice dispersion in `dim` dimensions. The band is [0, 2·dim].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dispersion<T> {
    dim: usize,
    _scalar: std::marker::PhantomData<T>,
}

impl<T: Real> Dispersion<T> {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self { dim, _scalar: std::marker::PhantomData }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Upper band edge 2d.
    pub fn band_max(&self) -> T {
        T::of(2.0 * self.dim as f64)
    }

    pub fn in_band(&self, e: T) -> bool {
        e >= T::zero() && e <= self.band_max()
    }

    pub fn energy(&self, p: &[T]) -> T {
        debug_assert_eq!(p.len(), self.dim);
        p.iter().map(|&x| axis_energy(x)).sum()
    }

    /// ∇e(p), component i = 2π sin(2πpᵢ).
    pub fn gradient(&self, p: &[T], out: &mut [T]) {
        debug_assert_eq!(out.len(), self.dim);
        let tau = T::two_pi();
        for (g, &x) in out.iter_mut().zip(p) {
            *g = tau * (tau * x).sin();
        }
    }

    /// Group velocity ∇e(p)/2π, i.e. sin(2πpᵢ) per axis.
    pub fn velocity(&self, p: &[T], out: &mut [T]) {
        let tau = T::two_pi();
        for (v, &x) in out.iter_mut().zip(p) {
            *v = (tau * x).sin();
        }
    }

    /// Torus distance from p to the nearest critical point of e (every
    /// coordinate in {0, ±1/2}).
    pub fn critical_distance(&self, p: &[T]) -> T {
        let half = T::of(0.5);
        p.iter()
            .map(|&x| {
                let r = wrap(x).abs();
                let d = r.min((half - r).abs());
                d * d
            })
            .sum::<T>()
            .sqrt()
    }
}

/// 1 − cos(2πx).
#[inline]
pub fn axis_energy<T: Real>(x: T) -> T {
    T::one() - (T::two_pi() * x).cos()
}

/// Map a coordinate to [-1/2, 1/2).
#[inline]
pub fn wrap<T: Real>(x: T) -> T {
    let half = T::of(0.5);
    let y = x - (x + half).floor();
    if y >= half {
        y - T::one()
    } else {
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use rand::Rng;

    #[test]
    fn named_points() {
        let disp = Dispersion::<f64>::new(3);
        assert_eq!(disp.energy(&[0.0, 0.0, 0.0]), 0.0);
        assert!((disp.energy(&[0.5, 0.5, 0.5]) - 6.0).abs() < 1e-15);
        assert!((disp.energy(&[0.25, 0.0, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let disp = Dispersion::<f64>::new(3);
        let p = [0.11, -0.37, 0.29];
        let mut g = [0.0; 3];
        disp.gradient(&p, &mut g);
        for i in 0..3 {
            let h = 1e-6;
            let mut a = p;
            let mut b = p;
            a[i] += h;
            b[i] -= h;
            let fd = (disp.energy(&a) - disp.energy(&b)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6, "axis {i}: {fd} vs {}", g[i]);
        }
    }

    #[test]
    fn band_symmetries_on_random_points() {
        let disp = Dispersion::<f64>::new(3);
        let mut rng = stream_rng(5, 0);
        for _ in 0..100_000 {
            let p: [f64; 3] = std::array::from_fn(|_| rng.gen::<f64>() - 0.5);
            let e = disp.energy(&p);
            assert!((0.0..=6.0).contains(&e));
            let neg = p.map(|x| -x);
            assert!((disp.energy(&neg) - e).abs() < 1e-12);
            let shifted = p.map(|x| wrap(x + 0.5));
            assert!((disp.energy(&shifted) - (6.0 - e)).abs() < 1e-12);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let disp = Dispersion::<f32>::new(3);
        assert!((disp.energy(&[0.25, 0.25, 0.0]) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn critical_distance_uses_torus_metric() {
        let disp = Dispersion::<f64>::new(3);
        assert_eq!(disp.critical_distance(&[0.0, 0.5, -0.5]), 0.0);
        assert!((disp.critical_distance(&[0.1, 0.0, 0.0]) - 0.1).abs() < 1e-15);
        assert!((disp.critical_distance(&[0.45, 0.0, 0.0]) - 0.05).abs() < 1e-14);
        assert!((disp.critical_distance(&[0.25, 0.25, 0.0]) - 0.25 * 2f64.sqrt()).abs() < 1e-14);
        assert!((wrap(0.75f64) + 0.25).abs() < 1e-15);
        assert_eq!(wrap(0.5f64), -0.5);
    }
}
