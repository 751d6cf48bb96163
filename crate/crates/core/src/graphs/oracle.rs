//! Brute-force check of the pairing expansion: E‖ψ_k(t)‖² over Gaussian
//! disorder on a small torus against the sum of graph amplitudes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::amplitude::{AmplitudeEngine, AmplitudeParams, FreeKind, MomentumAmplitude};
use super::permutation::GraphPermutation;
use super::GraphError;
use crate::quantum::{
    duhamel_term, sample_disorder, DisorderKind, DuhamelOptions, TorusLattice, WaveFunction,
};
use crate::rng::split_seed;
use crate::stats::{Estimate, Moments};

/// Orders for which the pairing sum is complete.
pub const MAX_ORACLE_K: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSumConfig {
    pub k: usize,
    pub lambda: f64,
    pub t: f64,
    pub side: usize,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub packet_width: f64,
    pub packet_momentum: Vec<f64>,
    pub duhamel_nodes: usize,
}

impl GraphSumConfig {
    pub fn new(k: usize, lambda: f64, t: f64, side: usize, samples: usize, seed: u64) -> Self {
        Self {
            k,
            lambda,
            t,
            side,
            dim: 3,
            samples,
            seed,
            packet_width: 1.0,
            packet_momentum: vec![0.21, 0.07, 0.0],
            duhamel_nodes: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingTerm {
    pub sigma: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSumReport {
    pub k: usize,
    pub monte_carlo: Estimate,
    pub pairings: Vec<PairingTerm>,
    /// Same-side pairings (k = 2 only).
    pub gate: f64,
    pub graph_sum: f64,
}

impl GraphSumReport {
    pub fn z_score(&self) -> f64 {
        self.monte_carlo.z_distance(&Estimate::exact(self.graph_sum))
    }

    pub fn consistent(&self, sigmas: f64) -> bool {
        self.monte_carlo.consistent_with(self.graph_sum, sigmas)
    }
}

pub fn graph_sum_vs_disorder(config: &GraphSumConfig) -> Result<GraphSumReport, GraphError> {
    let k = config.k;
    if k > MAX_ORACLE_K {
        return Err(GraphError::KTooLarge { k, max: MAX_ORACLE_K });
    }
    if config.samples < 2 {
        return Err(GraphError::InvalidParameter("need at least two disorder samples".into()));
    }
    let lattice = TorusLattice::new(config.side, config.dim)?;
    let center = vec![0.0; config.dim];
    let psi0 = WaveFunction::gaussian_packet(lattice, &center, config.packet_width, &config.packet_momentum)?;
    let options = DuhamelOptions { nodes: config.duhamel_nodes, ..Default::default() };
    let moments: Moments = (0..config.samples)
        .into_par_iter()
        .map(|s| {
            let disorder = sample_disorder(&lattice, DisorderKind::Gaussian, split_seed(config.seed, s as u64));
            duhamel_term(k, config.t, &disorder, config.lambda, &psi0, &options).map(|psi| psi.norm_sqr())
        })
        .collect::<Result<Vec<f64>, _>>()?
        .into_iter()
        .collect();

    let mut params = AmplitudeParams::new(config.dim, config.lambda, config.t, config.side);
    params.free = FreeKind::Bare;
    let engine = AmplitudeEngine::new(k, &params)?;
    let hat = MomentumAmplitude::from_wave(&psi0);
    let mut pairings = Vec::new();
    let mut total = 0.0;
    for sigma in GraphPermutation::all(k) {
        let v = engine.value(&sigma, &hat)?;
        total += v.re;
        pairings.push(PairingTerm { sigma: v.sigma, re: v.re, im: v.im });
    }
    let gate = if k == 2 { engine.gate(&hat)? } else { 0.0 };
    Ok(GraphSumReport {
        k,
        monte_carlo: moments.estimate(),
        pairings,
        gate,
        graph_sum: total + gate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_high_order() {
        let c = GraphSumConfig::new(3, 0.1, 1.0, 8, 4, 1);
        assert!(matches!(graph_sum_vs_disorder(&c), Err(GraphError::KTooLarge { .. })));
    }

    #[test]
    fn first_order_small_torus() {
        let mut c = GraphSumConfig::new(1, 0.2, 1.5, 8, 300, 11);
        c.dim = 2;
        c.packet_momentum = vec![0.21, 0.07];
        let r = graph_sum_vs_disorder(&c).unwrap();
        assert!(r.consistent(3.0), "{r:?}");
    }

    #[test]
    fn second_order_small_torus() {
        let mut c = GraphSumConfig::new(2, 0.2, 1.5, 8, 300, 12);
        c.dim = 2;
        c.packet_momentum = vec![0.21, 0.07];
        let r = graph_sum_vs_disorder(&c).unwrap();
        assert!(r.consistent(3.0), "{r:?}");
    }
}
