//! Graph amplitudes on a finite momentum torus.
//!
//! With momenta p = c/n, c ∈ {0, …, n−1}^d, and p̃ = M(σ)p,
//!
//!   V(k, σ) = λ^{2k} n^{−d(k+1)} Σ_p conj S(ω(p)) S(ω(p̃)) conj ψ̂₀(p₁) ψ̂₀(p̃₁),
//!
//! where S is the time-simplex propagator product, evaluated through its
//! frequency form with η > 0. On a torus of side n with Gaussian disorder
//! this is the exact pairing contribution of σ to E‖ψ_k(t)‖².

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::contour::{AlphaRule, ContourOptions};
use super::matrix::{build_m, IntMatrix};
use super::permutation::GraphPermutation;
use super::GraphError;
use crate::quad::GaussLegendre;
use crate::quantum::{FftPlan, WaveFunction};
use crate::spectral::{axis_energy, ThetaGrid};

pub const MAX_AMPLITUDE_K: usize = 3;
/// Largest k for E_η.
pub const MAX_BOUND_K: usize = 2;
const MIN_GRID: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeKind {
    /// ω = e.
    Bare,
    /// ω = e + λ²Θ_η(e).
    #[default]
    Renormalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeParams {
    pub dim: usize,
    pub lambda: f64,
    pub t: f64,
    /// Defaults to 1/t.
    pub eta: Option<f64>,
    /// Momentum points per axis.
    pub grid: usize,
    pub free: FreeKind,
    pub contour: ContourOptions,
}

impl AmplitudeParams {
    pub fn new(dim: usize, lambda: f64, t: f64, grid: usize) -> Self {
        Self {
            dim,
            lambda,
            t,
            eta: None,
            grid,
            free: FreeKind::default(),
            contour: ContourOptions::default(),
        }
    }

    pub fn eta(&self) -> f64 {
        self.eta.unwrap_or(1.0 / self.t)
    }

    fn validate(&self) -> Result<(), GraphError> {
        if self.dim == 0 || !(self.t > 0.0) || !(self.lambda >= 0.0) {
            return Err(GraphError::InvalidParameter(format!(
                "need d ≥ 1, t > 0, λ ≥ 0; got d = {}, t = {}, λ = {}",
                self.dim, self.t, self.lambda
            )));
        }
        if !(self.eta() > 0.0) {
            return Err(GraphError::InvalidParameter(format!("η must be positive, got {}", self.eta())));
        }
        if self.grid < MIN_GRID {
            return Err(GraphError::ResolutionTooCoarse { grid: self.grid });
        }
        Ok(())
    }
}

/// ψ̂₀ sampled at the grid momenta c/n.
#[derive(Debug, Clone)]
pub struct MomentumAmplitude {
    dim: usize,
    grid: usize,
    values: Vec<Complex64>,
}

impl MomentumAmplitude {
    /// Fourier transform of a torus wave function; the grid is the torus.
    pub fn from_wave(psi: &WaveFunction) -> Self {
        let lattice = psi.lattice();
        let values = psi.momentum(&FftPlan::new(lattice));
        Self { dim: lattice.dim(), grid: lattice.side(), values }
    }

    /// Normalized Gaussian packet on ℤ^d centred at the origin,
    /// ψ(x) ∝ exp(−|x|²/4w² + 2πi p₀·x).
    pub fn from_packet(dim: usize, grid: usize, width: f64, p0: &[f64]) -> Result<Self, GraphError> {
        if p0.len() != dim || !(width > 0.0) || grid == 0 {
            return Err(GraphError::InvalidParameter(
                "packet needs a positive width and a momentum of the lattice dimension".into(),
            ));
        }
        let axis: Vec<Vec<Complex64>> = p0
            .iter()
            .map(|&q| (0..grid).map(|c| packet_axis(width, c as f64 / grid as f64 - q)).collect())
            .collect();
        let values = (0..grid.pow(dim as u32))
            .map(|mut idx| {
                let mut v = Complex64::new(1.0, 0.0);
                for a in axis.iter() {
                    v *= a[idx % grid];
                    idx /= grid;
                }
                v
            })
            .collect();
        Ok(Self { dim, grid, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// n^{−d} Σ |ψ̂₀|².
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.values.len() as f64
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn packet_axis(width: f64, q: f64) -> Complex64 {
    let reach = (12.0 * width).ceil() as i64;
    let profile = |x: i64| (-(x * x) as f64 / (4.0 * width * width)).exp();
    let norm: f64 = (-reach..=reach).map(|x| profile(x).powi(2)).sum::<f64>().sqrt();
    (-reach..=reach)
        .map(|x| Complex64::from_polar(profile(x) / norm, -std::f64::consts::TAU * q * x as f64))
        .sum()
}

/// Fourier transform at momentum p of the normalized packet of
/// [`MomentumAmplitude::from_packet`].
pub fn packet_fourier(width: f64, p0: &[f64], p: &[f64]) -> Complex64 {
    p.iter().zip(p0).map(|(&x, &q)| packet_axis(width, x - q)).product()
}

/// Distinct grid energies and their frequencies.
struct EnergyGrid {
    dim: usize,
    n: usize,
    ids: Vec<usize>,
    omegas: Vec<Complex64>,
}

impl EnergyGrid {
    fn new(params: &AmplitudeParams) -> Result<Self, GraphError> {
        let (dim, n) = (params.dim, params.grid);
        let axis: Vec<f64> = (0..n).map(|c| axis_energy(c as f64 / n as f64)).collect();
        let energies: Vec<f64> = (0..n.pow(dim as u32))
            .map(|mut idx| {
                let mut e = 0.0;
                for _ in 0..dim {
                    e += axis[idx % n];
                    idx /= n;
                }
                e
            })
            .collect();
        let mut distinct = energies.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
        let ids = energies
            .iter()
            .map(|e| distinct.partition_point(|d| *d < e - 1e-10))
            .collect();
        let omegas = match params.free {
            FreeKind::Bare => distinct.iter().map(|&e| Complex64::new(e, 0.0)).collect(),
            FreeKind::Renormalized => {
                let grid = ThetaGrid::new(dim, params.eta(), None)?;
                let l2 = params.lambda * params.lambda;
                distinct
                    .par_iter()
                    .map(|&e| Complex64::new(e, 0.0) + grid.eval(e) * l2)
                    .collect()
            }
        };
        Ok(Self { dim, n, ids, omegas })
    }

    fn points(&self) -> usize {
        self.ids.len()
    }
}

/// (−i)^k S over every (k+1)-tuple of distinct energies; entry index
/// Σ_j id_j E^j.
struct PropagatorTable {
    k: usize,
    levels: usize,
    values: Vec<Complex64>,
    tail: f64,
    sup: f64,
}

fn tuple_ids(mut index: usize, levels: usize, out: &mut [usize]) {
    for o in out.iter_mut() {
        *o = index % levels;
        index /= levels;
    }
}

impl PropagatorTable {
    fn new(k: usize, energies: &EnergyGrid, params: &AmplitudeParams) -> Result<Self, GraphError> {
        let levels = energies.omegas.len();
        let (mut lo, mut hi, mut ilo) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
        for w in &energies.omegas {
            lo = lo.min(w.re);
            hi = hi.max(w.re);
            ilo = ilo.min(w.im);
        }
        let half_diag2 = ((hi - lo).powi(2) + ilo.powi(2)) / 4.0;
        let spread = if k == 0 { 0.0 } else { (k + 1) as f64 * half_diag2 };
        let rule = AlphaRule::new(k, params.t, params.eta(), lo, hi, spread, &params.contour)?;
        let count = levels.pow(k as u32 + 1);
        let entries: Vec<(Complex64, f64)> = (0..count)
            .into_par_iter()
            .map_init(
                || (vec![0usize; k + 1], vec![Complex64::default(); k + 1]),
                |(ids, ws), index| {
                    tuple_ids(index, levels, ids);
                    for (w, &id) in ws.iter_mut().zip(ids.iter()) {
                        *w = energies.omegas[id];
                    }
                    rule.eval(ws)
                },
            )
            .collect();
        let tail = entries.iter().map(|e| e.1).fold(0.0, f64::max);
        let tolerance = params.contour.tail_tolerance * super::contour::simplex_scale(k, params.t);
        if tail > tolerance {
            return Err(GraphError::QuadratureDivergence { estimate: tail, tolerance });
        }
        let values: Vec<Complex64> = entries.into_iter().map(|e| e.0).collect();
        let sup = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(Self { k, levels, values, tail, sup })
    }

    fn get(&self, ids: &[usize]) -> Complex64 {
        let mut index = 0;
        for &id in ids.iter().rev() {
            index = index * self.levels + id;
        }
        self.values[index]
    }
}

/// Propagator table for one order k, shared by all σ ∈ P_k.
pub struct AmplitudeEngine {
    params: AmplitudeParams,
    energies: EnergyGrid,
    table: PropagatorTable,
}

/// Σ over p ∈ (grid)^{k+1} of f(p, M p), accumulated in parallel over p₁.
fn pair_sum<F>(k: usize, m: &IntMatrix, dim: usize, n: usize, skip: &[bool], f: F) -> Complex64
where
    F: Fn(&[usize], &[usize]) -> Complex64 + Sync,
{
    let points = n.pow(dim as u32);
    let coords: Vec<Vec<i64>> = (0..points)
        .map(|mut idx| {
            (0..dim)
                .map(|_| {
                    let c = (idx % n) as i64;
                    idx /= n;
                    c
                })
                .collect()
        })
        .collect();
    let rows = m.rows();
    let inner = points.pow(k as u32);
    (0..points)
        .into_par_iter()
        .filter(|&p1| !skip[p1])
        .map(|p1| {
            let mut p = vec![0usize; k + 1];
            let mut pt = vec![0usize; k + 1];
            p[0] = p1;
            let mut acc = Complex64::default();
            for rest in 0..inner {
                let mut r = rest;
                for slot in p.iter_mut().skip(1) {
                    *slot = r % points;
                    r /= points;
                }
                for (i, row) in rows.iter().enumerate() {
                    let mut index = 0;
                    for a in (0..dim).rev() {
                        let s: i64 = row.iter().zip(&p).map(|(&mij, &pj)| mij * coords[pj][a]).sum();
                        index = index * n + s.rem_euclid(n as i64) as usize;
                    }
                    pt[i] = index;
                }
                acc += f(&p, &pt);
            }
            acc
        })
        .sum()
}

impl AmplitudeEngine {
    pub fn new(k: usize, params: &AmplitudeParams) -> Result<Self, GraphError> {
        if k > MAX_AMPLITUDE_K {
            return Err(GraphError::KTooLarge { k, max: MAX_AMPLITUDE_K });
        }
        params.validate()?;
        let energies = EnergyGrid::new(params)?;
        let table = PropagatorTable::new(k, &energies, params)?;
        Ok(Self { params: *params, energies, table })
    }

    fn check_state(&self, psi: &MomentumAmplitude) -> Result<(), GraphError> {
        if psi.dim != self.energies.dim || psi.grid != self.energies.n {
            return Err(GraphError::InvalidParameter(format!(
                "initial state sampled on {}^{} momenta, amplitude grid is {}^{}",
                psi.grid, psi.dim, self.energies.n, self.energies.dim
            )));
        }
        Ok(())
    }

    pub fn value(
        &self,
        sigma: &GraphPermutation,
        psi: &MomentumAmplitude,
    ) -> Result<AmplitudeEstimate, GraphError> {
        let k = self.table.k;
        if sigma.k() != k {
            return Err(GraphError::InvalidParameter(format!(
                "permutation of {} elements for a k = {k} amplitude",
                sigma.k()
            )));
        }
        self.check_state(psi)?;
        let (dim, n) = (self.energies.dim, self.energies.n);
        let m = build_m(sigma);
        let cutoff = 1e-14 * psi.sup();
        let skip: Vec<bool> = psi.values.iter().map(|z| z.norm() <= cutoff).collect();
        let ids = &self.energies.ids;
        let table = &self.table;
        let sum = pair_sum(k, &m, dim, n, &skip, |p, pt| {
            let mut a = [0usize; MAX_AMPLITUDE_K + 1];
            let mut b = [0usize; MAX_AMPLITUDE_K + 1];
            for j in 0..=k {
                a[j] = ids[p[j]];
                b[j] = ids[pt[j]];
            }
            table.get(&a[..=k]).conj()
                * table.get(&b[..=k])
                * psi.values[p[0]].conj()
                * psi.values[pt[0]]
        });
        let lam = self.params.lambda.powi(2 * k as i32);
        let value = sum * lam / (self.energies.points() as f64).powi(k as i32 + 1);
        let error = lam * 2.0 * table.tail * table.sup * psi.norm_sqr();
        Ok(AmplitudeEstimate::new(k, sigma, &self.params, value, error))
    }

    /// Same-side pairing of the two potentials of a k = 2 term.
    pub fn gate(&self, psi: &MomentumAmplitude) -> Result<f64, GraphError> {
        if self.table.k != 2 {
            return Err(GraphError::InvalidParameter("the gate term exists for k = 2 only".into()));
        }
        self.check_state(psi)?;
        let ids = &self.energies.ids;
        let points = self.energies.points() as f64;
        let lam = self.params.lambda.powi(4);
        let total: f64 = (0..ids.len())
            .into_par_iter()
            .map(|p| {
                let inner: Complex64 =
                    ids.iter().map(|&q| self.table.get(&[ids[p], q, ids[p]])).sum::<Complex64>() / points;
                inner.norm_sqr() * psi.values[p].norm_sqr()
            })
            .sum();
        Ok(lam * total / points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeEstimate {
    pub k: usize,
    pub sigma: String,
    pub re: f64,
    pub im: f64,
    pub lambda: f64,
    pub t: f64,
    pub eta: f64,
    pub grid: usize,
    /// Quadrature error bound, or the grid-refinement difference when larger.
    pub error: f64,
}

impl AmplitudeEstimate {
    fn new(k: usize, sigma: &GraphPermutation, p: &AmplitudeParams, v: Complex64, error: f64) -> Self {
        Self {
            k,
            sigma: sigma.to_string(),
            re: v.re,
            im: v.im,
            lambda: p.lambda,
            t: p.t,
            eta: p.eta(),
            grid: p.grid,
            error,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.value().norm()
    }
}

/// V(k, σ) for an initial state sampled on the parameter grid.
pub fn amplitude(
    k: usize,
    sigma: &GraphPermutation,
    params: &AmplitudeParams,
    psi: &MomentumAmplitude,
) -> Result<AmplitudeEstimate, GraphError> {
    AmplitudeEngine::new(k, params)?.value(sigma, psi)
}

/// V(k, σ) for a Gaussian packet on ℤ^d, with the difference to the
/// half-resolution grid folded into the error when that grid is admissible.
pub fn amplitude_with_packet(
    k: usize,
    sigma: &GraphPermutation,
    params: &AmplitudeParams,
    width: f64,
    p0: &[f64],
) -> Result<AmplitudeEstimate, GraphError> {
    let psi = MomentumAmplitude::from_packet(params.dim, params.grid, width, p0)?;
    let mut fine = amplitude(k, sigma, params, &psi)?;
    let half = params.grid / 2;
    if half >= MIN_GRID && half % 2 == 0 {
        let coarse_params = AmplitudeParams { grid: half, ..*params };
        let coarse_psi = MomentumAmplitude::from_packet(params.dim, half, width, p0)?;
        let coarse = amplitude(k, sigma, &coarse_params, &coarse_psi)?;
        fine.error = fine.error.max((fine.value() - coarse.value()).norm());
    }
    Ok(fine)
}

/// Same-side pairing contribution to E‖ψ₂(t)‖².
pub fn gate_term(params: &AmplitudeParams, psi: &MomentumAmplitude) -> Result<f64, GraphError> {
    AmplitudeEngine::new(2, params)?.gate(psi)
}

/// (V(k, id), V(k, reversal)) from a shared table; for k = 2 the reversal
/// is the transposition.
pub fn ladder_dominance(
    k: usize,
    params: &AmplitudeParams,
    psi: &MomentumAmplitude,
) -> Result<(AmplitudeEstimate, AmplitudeEstimate), GraphError> {
    if k < 2 {
        return Err(GraphError::InvalidParameter("crossing graphs need k ≥ 2".into()));
    }
    let engine = AmplitudeEngine::new(k, params)?;
    let id = GraphPermutation::identity(k);
    let reversal = GraphPermutation::new(&(1..=k).rev().collect::<Vec<_>>())?;
    Ok((engine.value(&id, psi)?, engine.value(&reversal, psi)?))
}

/// E_η(M(σ)) = n^{−d(k+1)} Σ_p F(p) F(M p) with
/// F(p) = ∫ dα Π_j |α − ω(p_j) + iη|^{−1} over |α| ≤ 4d + 10√η.
pub fn e_eta_bound(k: usize, sigma: &GraphPermutation, params: &AmplitudeParams) -> Result<f64, GraphError> {
    if k > MAX_BOUND_K {
        return Err(GraphError::KTooLarge { k, max: MAX_BOUND_K });
    }
    if sigma.k() != k {
        return Err(GraphError::InvalidParameter("permutation size differs from k".into()));
    }
    params.validate()?;
    let energies = EnergyGrid::new(params)?;
    let eta = params.eta();
    let reach = 4.0 * params.dim as f64 + 10.0 * eta.sqrt();
    let panels = (2.0 * reach / (eta / 2.0)).ceil() as usize;
    let gl = GaussLegendre::new(8);
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|i| {
            let a = -reach + 2.0 * reach * i as f64 / panels as f64;
            gl.on(a, a + 2.0 * reach / panels as f64).collect::<Vec<_>>()
        })
        .collect();
    let levels = energies.omegas.len();
    let table: Vec<f64> = (0..levels.pow(k as u32 + 1))
        .into_par_iter()
        .map_init(
            || vec![0usize; k + 1],
            |ids, index| {
                tuple_ids(index, levels, ids);
                nodes
                    .iter()
                    .map(|&(a, w)| {
                        w * ids
                            .iter()
                            .map(|&id| 1.0 / (a - energies.omegas[id] + Complex64::new(0.0, eta)).norm())
                            .product::<f64>()
                    })
                    .sum()
            },
        )
        .collect();
    let lookup = |ids: &[usize]| {
        let mut index = 0;
        for &id in ids.iter().rev() {
            index = index * levels + id;
        }
        table[index]
    };
    let skip = vec![false; energies.points()];
    let ids = &energies.ids;
    let sum = pair_sum(k, &build_m(sigma), energies.dim, energies.n, &skip, |p, pt| {
        let mut a = [0usize; MAX_BOUND_K + 1];
        let mut b = [0usize; MAX_BOUND_K + 1];
        for j in 0..=k {
            a[j] = ids[p[j]];
            b[j] = ids[pt[j]];
        }
        Complex64::new(lookup(&a[..=k]) * lookup(&b[..=k]), 0.0)
    });
    Ok(sum.re / (energies.points() as f64).powi(k as i32 + 1))
}

/// |V| against E_η, with the constant C = λ^{2k} e^{2tη} (2π)^{−2} ‖ψ̂₀‖∞²
/// that converts the absolute-value integral into a bound on V.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub value: f64,
    pub bound: f64,
    pub constant: f64,
}

impl BoundCheck {
    pub fn new(estimate: &AmplitudeEstimate, bound: f64, psi: &MomentumAmplitude) -> Self {
        let constant = estimate.lambda.powi(2 * estimate.k as i32) * (2.0 * estimate.t * estimate.eta).exp()
            / (2.0 * std::f64::consts::PI).powi(2)
            * psi.sup().powi(2);
        Self { value: estimate.abs(), bound, constant }
    }

    /// |V| ≤ C·E_η.
    pub fn holds(&self) -> bool {
        self.value <= self.constant * self.bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::TorusLattice;

    fn packet(n: usize) -> MomentumAmplitude {
        MomentumAmplitude::from_packet(2, n, 0.8, &[0.13, 0.31]).unwrap()
    }

    #[test]
    fn free_evolution_norm() {
        let mut params = AmplitudeParams::new(2, 0.0, 2.0, 8);
        params.free = FreeKind::Bare;
        let psi = packet(8);
        let v = amplitude(0, &GraphPermutation::identity(0), &params, &psi).unwrap();
        assert!((v.re - psi.norm_sqr()).abs() < 1e-6, "{v:?}");
        assert!(v.im.abs() < 1e-9);
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn damped_free_evolution() {
        let params = AmplitudeParams::new(2, 0.4, 3.0, 8);
        let psi = packet(8);
        let v = amplitude(0, &GraphPermutation::identity(0), &params, &psi).unwrap();
        assert!(v.re < psi.norm_sqr() && v.re > 0.0);
    }

    #[test]
    fn torus_state_matches_grid() {
        let lat = TorusLattice::new(8, 2).unwrap();
        let psi = WaveFunction::point_mass(lat, 0);
        let m = MomentumAmplitude::from_wave(&psi);
        assert!((m.norm_sqr() - 1.0).abs() < 1e-12);
        let params = AmplitudeParams::new(3, 0.3, 2.0, 8);
        assert!(amplitude(1, &GraphPermutation::identity(1), &params, &m).is_err());
    }

    #[test]
    fn order_limits() {
        let params = AmplitudeParams::new(2, 0.3, 2.0, 8);
        let psi = packet(8);
        assert!(matches!(
            amplitude(4, &GraphPermutation::identity(4), &params, &psi),
            Err(GraphError::KTooLarge { .. })
        ));
        let coarse = AmplitudeParams { grid: 2, ..params };
        assert!(matches!(
            amplitude(1, &GraphPermutation::identity(1), &coarse, &packet(2)),
            Err(GraphError::ResolutionTooCoarse { .. })
        ));
        assert!(matches!(
            e_eta_bound(3, &GraphPermutation::identity(3), &params),
            Err(GraphError::KTooLarge { .. })
        ));
    }

    #[test]
    fn homogeneous_in_lambda() {
        let mut params = AmplitudeParams::new(2, 0.2, 2.0, 8);
        params.free = FreeKind::Bare;
        let psi = packet(8);
        let s = GraphPermutation::identity(1);
        let a = amplitude(1, &s, &params, &psi).unwrap();
        params.lambda = 0.4;
        let b = amplitude(1, &s, &params, &psi).unwrap();
        assert!((b.value() - a.value() * 4.0).norm() < 1e-10 * b.abs());
    }

    #[test]
    fn e_eta_monotone_in_eta() {
        let mut params = AmplitudeParams::new(2, 0.3, 4.0, 8);
        params.free = FreeKind::Bare;
        let s = GraphPermutation::identity(1);
        let a = e_eta_bound(1, &s, &AmplitudeParams { eta: Some(0.25), ..params }).unwrap();
        let b = e_eta_bound(1, &s, &AmplitudeParams { eta: Some(0.5), ..params }).unwrap();
        assert!(b < a && b > 0.0);
    }

    #[test]
    fn packet_fourier_matches_grid() {
        let psi = packet(8);
        let v = packet_fourier(0.8, &[0.13, 0.31], &[3.0 / 8.0, 5.0 / 8.0]);
        assert!((psi.values()[3 + 5 * 8] - v).norm() < 1e-14);
    }
}
