use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Spectral,
    Evolve,
    KineticCompare,
    Boltzmann,
    Graphs,
    LadderCheck,
    Census,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Spectral,
        Experiment::Evolve,
        Experiment::KineticCompare,
        Experiment::Boltzmann,
        Experiment::Graphs,
        Experiment::LadderCheck,
        Experiment::Census,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Experiment::Spectral => "spectral",
            Experiment::Evolve => "evolve",
            Experiment::KineticCompare => "kinetic-compare",
            Experiment::Boltzmann => "boltzmann",
            Experiment::Graphs => "graphs",
            Experiment::LadderCheck => "ladder-check",
            Experiment::Census => "census",
        }
    }

    /// Seed keys that must be present.
    fn seeds(&self) -> &'static [&'static str] {
        match self {
            Experiment::Census => &[],
            Experiment::Graphs => &[],
            _ => &["seed"],
        }
    }
}

impl std::str::FromStr for Experiment {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.tag() == s)
            .ok_or_else(|| HarnessError::invalid("experiment", format!("unknown experiment {s:?}")))
    }
}

/// Relation between microscopic time t and macroscopic time T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scaling {
    /// T = λ²t.
    Kinetic,
    /// T = λ^{κ+2}t.
    Diffusive { kappa: f64 },
}

impl Scaling {
    pub fn factor(&self, lambda: f64) -> f64 {
        match *self {
            Scaling::Kinetic => lambda * lambda,
            Scaling::Diffusive { kappa } => lambda.powf(kappa + 2.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self { experiment, parameters: BTreeMap::new(), output_path: None }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::invalid("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// `other`'s parameters and output path replace ours where present.
    pub fn overlay(mut self, other: ExperimentConfig) -> Result<Self, HarnessError> {
        if other.experiment != self.experiment {
            return Err(HarnessError::invalid(
                "experiment",
                format!("config file is for {}, command is {}", other.experiment.tag(), self.experiment.tag()),
            ));
        }
        self.parameters.extend(other.parameters);
        if other.output_path.is_some() {
            self.output_path = other.output_path;
        }
        Ok(self)
    }

    /// SHA-256 of the canonical JSON form of experiment and parameters, in
    /// hex, truncated to 16 digits. The output path does not enter.
    pub fn hash(&self) -> String {
        let canonical = serde_json::json!({
            "experiment": self.experiment,
            "parameters": self.parameters,
        });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        hex::encode(digest)[..16].to_string()
    }

    pub fn scaling(&self) -> Result<Scaling, HarnessError> {
        match self.opt_str("scaling")?.as_deref() {
            None | Some("kinetic") => Ok(Scaling::Kinetic),
            Some("diffusive") => Ok(Scaling::Diffusive { kappa: self.f64("kappa")? }),
            Some(other) => Err(HarnessError::invalid("scaling", format!("expected kinetic or diffusive, got {other:?}"))),
        }
    }

    /// Seeds present, and T consistent with t under the declared scaling
    /// when both are given.
    pub fn validate(&self) -> Result<(), HarnessError> {
        for key in self.experiment.seeds() {
            self.u64(key)?;
        }
        let scaling = self.scaling()?;
        if let (Some(t), Some(big)) = (self.opt_f64("t")?, self.opt_f64("T")?) {
            let lambda = self.f64("lambda")?;
            let expected = scaling.factor(lambda) * t;
            if (big - expected).abs() > 1e-9 * expected.abs().max(1.0) {
                return Err(HarnessError::invalid(
                    "T",
                    format!("T = {big} but the declared scaling requires T = {expected} for t = {t}, λ = {lambda}"),
                ));
            }
        }
        if let Some(n) = self.opt_usize("threads")? {
            if n == 0 {
                return Err(HarnessError::invalid("threads", "must be at least 1"));
            }
        }
        Ok(())
    }

    fn raw(&self, key: &str) -> Option<&Value> {
        self.parameters.get(key).filter(|v| !v.is_null())
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>, HarnessError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| HarnessError::invalid(key, format!("expected a number, got {v}"))),
        }
    }

    pub fn f64(&self, key: &str) -> Result<f64, HarnessError> {
        self.opt_f64(key)?.ok_or_else(|| HarnessError::invalid(key, "required"))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, HarnessError> {
        Ok(self.opt_f64(key)?.unwrap_or(default))
    }

    pub fn opt_u64(&self, key: &str) -> Result<Option<u64>, HarnessError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => {
                let parsed = v.as_u64().or_else(|| {
                    v.as_f64().filter(|x| *x >= 0.0 && x.fract() == 0.0 && *x < 2f64.powi(53)).map(|x| x as u64)
                });
                parsed
                    .map(Some)
                    .ok_or_else(|| HarnessError::invalid(key, format!("expected a non-negative integer, got {v}")))
            }
        }
    }

    pub fn u64(&self, key: &str) -> Result<u64, HarnessError> {
        self.opt_u64(key)?.ok_or_else(|| HarnessError::invalid(key, "required"))
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, HarnessError> {
        Ok(self.opt_u64(key)?.unwrap_or(default))
    }

    pub fn opt_usize(&self, key: &str) -> Result<Option<usize>, HarnessError> {
        Ok(self.opt_u64(key)?.map(|v| v as usize))
    }

    pub fn usize(&self, key: &str) -> Result<usize, HarnessError> {
        Ok(self.u64(key)? as usize)
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, HarnessError> {
        Ok(self.opt_usize(key)?.unwrap_or(default))
    }

    pub fn opt_str(&self, key: &str) -> Result<Option<String>, HarnessError> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(HarnessError::invalid(key, format!("expected a string, got {v}"))),
        }
    }

    pub fn opt_bool(&self, key: &str) -> Result<Option<bool>, HarnessError> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::Bool(b)) => Ok(Some(*b)),
            Some(v) => Err(HarnessError::invalid(key, format!("expected true or false, got {v}"))),
        }
    }

    /// A list of numbers; a bare number counts as a one-element list.
    pub fn opt_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, HarnessError> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_f64()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| HarnessError::invalid(key, format!("expected numbers, found {v}")))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some(v) => v
                .as_f64()
                .map(|x| Some(vec![x]))
                .ok_or_else(|| HarnessError::invalid(key, format!("expected a list of numbers, got {v}"))),
        }
    }

    pub fn f64_list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, HarnessError> {
        Ok(self.opt_f64_list(key)?.unwrap_or_else(|| default.to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_key_order_and_output() {
        let a = ExperimentConfig::new(Experiment::Census).with("k", 6).with("threads", 2);
        let mut b = ExperimentConfig::new(Experiment::Census).with("threads", 2).with("k", 6);
        b.output_path = Some("elsewhere".into());
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), a.clone().with("k", 7).hash());
    }

    #[test]
    fn scaling_guard() {
        let c = ExperimentConfig::new(Experiment::KineticCompare)
            .with("seed", 1)
            .with("lambda", 0.3)
            .with("t", 10.0)
            .with("T", 1.0);
        assert!(matches!(c.validate(), Err(HarnessError::ConfigInvalid { .. })));
        let ok = c.with("T", 0.9);
        ok.validate().unwrap();
    }

    #[test]
    fn seeds_are_required() {
        let c = ExperimentConfig::new(Experiment::Boltzmann).with("energy", 3.0);
        match c.validate() {
            Err(HarnessError::ConfigInvalid { field, .. }) => assert_eq!(field, "seed"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trips_through_json() {
        let c = ExperimentConfig::new(Experiment::LadderCheck).with("lambdas", vec![0.5, 0.25]).with("seed", 3);
        let text = serde_json::to_string(&c).unwrap();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.f64_list_or("lambdas", &[]).unwrap(), vec![0.5, 0.25]);
        assert!(ExperimentConfig::from_json(r#"{"experiment":"nope"}"#).is_err());
    }
}
