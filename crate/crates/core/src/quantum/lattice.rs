use super::QuantumError;
use crate::spectral::Dispersion;

/// Periodic lattice (Z/LZ)^d with row-major site ordering (last axis
/// fastest).
///
/// Sites are labelled by signed box coordinates in [−L/2, L/2), and the
/// Fourier dual grid by momenta k/L in the same range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TorusLattice {
    side: usize,
    dim: usize,
}

impl TorusLattice {
    pub fn new(side: usize, dim: usize) -> Result<Self, QuantumError> {
        if side < 8 || side % 2 != 0 || dim == 0 {
            return Err(QuantumError::InvalidLattice { side, dim });
        }
        Ok(Self { side, dim })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sites(&self) -> usize {
        self.side.pow(self.dim as u32)
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords.iter().fold(0, |acc, &c| acc * self.side + c % self.side)
    }

    /// Index of a site given by signed coordinates (taken mod L).
    pub fn index_signed(&self, coords: &[i64]) -> usize {
        let l = self.side as i64;
        coords.iter().fold(0, |acc, &c| acc * self.side + c.rem_euclid(l) as usize)
    }

    pub fn coords(&self, mut index: usize, out: &mut [usize]) {
        for c in out.iter_mut().rev() {
            *c = index % self.side;
            index /= self.side;
        }
    }

    /// Signed representative of an axis index, in [−L/2, L/2).
    pub fn signed(&self, i: usize) -> i64 {
        let l = self.side as i64;
        let i = i as i64;
        if i < l / 2 {
            i
        } else {
            i - l
        }
    }

    pub fn signed_coords(&self, index: usize) -> Vec<i64> {
        let mut c = vec![0; self.dim];
        self.coords(index, &mut c);
        c.into_iter().map(|i| self.signed(i)).collect()
    }

    /// Momentum k/L of an axis index, in [−1/2, 1/2).
    pub fn momentum(&self, i: usize) -> f64 {
        self.signed(i) as f64 / self.side as f64
    }

    pub fn momentum_coords(&self, index: usize) -> Vec<f64> {
        let mut c = vec![0; self.dim];
        self.coords(index, &mut c);
        c.into_iter().map(|i| self.momentum(i)).collect()
    }

    /// e(p) at every point of the momentum grid.
    pub fn energies(&self) -> Vec<f64> {
        let disp = Dispersion::<f64>::new(self.dim);
        (0..self.sites()).map(|k| disp.energy(&self.momentum_coords(k))).collect()
    }

    /// |x|² in signed coordinates at every site.
    pub fn radius_squared(&self) -> Vec<f64> {
        (0..self.sites())
            .map(|i| self.signed_coords(i).iter().map(|&c| (c * c) as f64).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_or_small_sides() {
        assert!(TorusLattice::new(9, 3).is_err());
        assert!(TorusLattice::new(6, 3).is_err());
        assert!(TorusLattice::new(8, 0).is_err());
        assert!(TorusLattice::new(8, 3).is_ok());
    }

    #[test]
    fn index_round_trip() {
        let lat = TorusLattice::new(8, 3).unwrap();
        let mut c = [0; 3];
        for i in 0..lat.sites() {
            lat.coords(i, &mut c);
            assert_eq!(lat.index(&c), i);
            assert_eq!(lat.index_signed(&lat.signed_coords(i)), i);
        }
        assert_eq!(lat.signed(4), -4);
        assert_eq!(lat.momentum(2), 0.25);
    }

    #[test]
    fn energies_span_band() {
        let lat = TorusLattice::new(8, 3).unwrap();
        let e = lat.energies();
        assert_eq!(e[0], 0.0);
        let max = e.iter().cloned().fold(0.0, f64::max);
        assert!((max - 6.0).abs() < 1e-12);
    }
}
