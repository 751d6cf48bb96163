use rand::Rng;
use rand_distr::StandardNormal;

use super::lattice::TorusLattice;
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisorderKind {
    Gaussian,
    Rademacher,
}

impl std::str::FromStr for DisorderKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "rademacher" => Ok(Self::Rademacher),
            other => Err(format!("unknown disorder distribution {other:?}")),
        }
    }
}

/// I.i.d. on-site couplings v_γ with mean 0 and variance 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderSample {
    pub values: Vec<f64>,
    pub kind: DisorderKind,
    pub seed: u64,
}

impl DisorderSample {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn sample_disorder(lattice: &TorusLattice, kind: DisorderKind, seed: u64) -> DisorderSample {
    let mut rng = stream_rng(seed, 0);
    let values = (0..lattice.sites())
        .map(|_| match kind {
            DisorderKind::Gaussian => rng.sample::<f64, _>(StandardNormal),
            DisorderKind::Rademacher => {
                if rng.gen::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
        })
        .collect();
    DisorderSample { values, kind, seed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rademacher_support() {
        let lat = TorusLattice::new(8, 3).unwrap();
        let s = sample_disorder(&lat, DisorderKind::Rademacher, 3);
        assert!(s.values.iter().all(|&v| v == 1.0 || v == -1.0));
    }

    #[test]
    fn deterministic_under_seed() {
        let lat = TorusLattice::new(8, 3).unwrap();
        let a = sample_disorder(&lat, DisorderKind::Gaussian, 11);
        let b = sample_disorder(&lat, DisorderKind::Gaussian, 11);
        let c = sample_disorder(&lat, DisorderKind::Gaussian, 12);
        assert_eq!(a, b);
        assert_ne!(a.values, c.values);
    }
}
