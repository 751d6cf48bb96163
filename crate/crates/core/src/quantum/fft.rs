use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::lattice::TorusLattice;

/// Multidimensional FFT on a [`TorusLattice`].
///
/// `forward` computes ψ̂(p) = Σ_x e^{−2πi p·x} ψ(x); `inverse` computes
/// L^{−d} Σ_p e^{2πi p·x} ψ̂(p), so the pair round-trips exactly.
#[derive(Clone)]
pub struct FftPlan {
    lattice: TorusLattice,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FftPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftPlan").field("lattice", &self.lattice).finish()
    }
}

const LINES_PER_TASK: usize = 64;

impl FftPlan {
    pub fn new(lattice: TorusLattice) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(lattice.side());
        let inv = planner.plan_fft_inverse(lattice.side());
        Self { lattice, fwd, inv }
    }

    pub fn lattice(&self) -> TorusLattice {
        self.lattice
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.fwd);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inv);
        let scale = 1.0 / self.lattice.sites() as f64;
        data.par_iter_mut().for_each(|z| *z *= scale);
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let l = self.lattice.side();
        let d = self.lattice.dim();
        assert_eq!(data.len(), self.lattice.sites());
        let chunk = l * LINES_PER_TASK;
        // last axis is contiguous
        data.par_chunks_mut(chunk).for_each(|c| {
            let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(c, &mut scratch);
        });
        if d == 1 {
            return;
        }
        let mut lines = vec![Complex64::default(); data.len()];
        for axis in 0..d - 1 {
            let stride = l.pow((d - 1 - axis) as u32);
            let block = stride * l;
            // gather: line (outer, inner) holds data[outer*block + j*stride + inner]
            lines.par_chunks_mut(block).zip(data.par_chunks(block)).for_each(|(dst, src)| {
                for inner in 0..stride {
                    for j in 0..l {
                        dst[inner * l + j] = src[j * stride + inner];
                    }
                }
            });
            lines.par_chunks_mut(chunk).for_each(|c| {
                let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
                fft.process_with_scratch(c, &mut scratch);
            });
            data.par_chunks_mut(block).zip(lines.par_chunks(block)).for_each(|(dst, src)| {
                for inner in 0..stride {
                    for j in 0..l {
                        dst[j * stride + inner] = src[inner * l + j];
                    }
                }
            });
        }
    }
}
