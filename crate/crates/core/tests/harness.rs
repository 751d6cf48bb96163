use std::path::Path;

use proptest::prelude::*;
use qlz_core::harness::{
    check_golden, run, thread_count, Experiment, ExperimentConfig, HarnessError, ResultTable,
    THREADS_ENV,
};

fn census(k: u64) -> ExperimentConfig {
    ExperimentConfig::new(Experiment::Census).with("k", k)
}

fn field_of(err: HarnessError) -> String {
    match err {
        HarnessError::ConfigInvalid { field, .. } => field,
        other => panic!("expected ConfigInvalid, got {other:?}"),
    }
}

#[test]
fn missing_seed_is_a_config_error() {
    let c = ExperimentConfig::new(Experiment::Boltzmann).with("energy", 3.0);
    assert_eq!(field_of(run(&c).unwrap_err()), "seed");
}

#[test]
fn kinetic_scaling_guard() {
    let base = ExperimentConfig::new(Experiment::KineticCompare).with("seed", 1).with("lambda", 0.3).with("t", 10.0);
    assert_eq!(field_of(base.clone().with("T", 1.0).validate().unwrap_err()), "T");
    assert!(base.clone().with("T", 0.9).validate().is_ok());
    let diffusive = base.with("scaling", "diffusive").with("kappa", 0.5);
    let expected = 0.3f64.powf(2.5) * 10.0;
    assert!(diffusive.clone().with("T", expected).validate().is_ok());
    assert_eq!(field_of(diffusive.with("T", 0.9).validate().unwrap_err()), "T");
}

#[test]
fn unknown_config_fields_are_rejected() {
    let err = ExperimentConfig::from_json(r#"{"experiment": "census", "parameters": {"k": 3}, "extra": 1}"#);
    assert_eq!(field_of(err.unwrap_err()), "config");
}

#[test]
fn overlay_prefers_the_file() {
    let flags = census(4).with("threads", 2);
    let file = ExperimentConfig::from_json(r#"{"experiment": "census", "parameters": {"k": 5}}"#).unwrap();
    let merged = flags.overlay(file).unwrap();
    assert_eq!(merged.u64("k").unwrap(), 5);
    assert_eq!(merged.u64("threads").unwrap(), 2);
    let other = ExperimentConfig::new(Experiment::Spectral);
    assert!(census(4).overlay(other).is_err());
}

#[test]
fn hash_ignores_output_path() {
    let mut a = census(5);
    let b = census(5);
    a.output_path = Some("/tmp/elsewhere".into());
    assert_eq!(a.hash(), b.hash());
    assert_ne!(a.hash(), census(6).hash());
    assert_eq!(a.hash().len(), 16);
}

#[test]
fn census_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = census(6);
    c.output_path = Some(dir.path().join("a"));
    run(&c).unwrap();
    c.output_path = Some(dir.path().join("b"));
    run(&c).unwrap();
    let a = std::fs::read(dir.path().join("a/census.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/census.csv")).unwrap();
    assert_eq!(a, b);
    assert!(dir.path().join("a/summary.json").exists());
}

#[test]
fn census_matches_golden() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/census_k6.csv");
    let config = census(6);
    let table = check_golden(&golden, &config.hash()).unwrap();
    let out = run(&config).unwrap();
    let fresh = out.table("census").unwrap();
    assert_eq!(fresh.to_csv_string(), std::fs::read_to_string(&golden).unwrap());
    assert_eq!(fresh.to_csv_string(), table.to_csv_string());
}

#[test]
fn stale_golden_is_reported() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/census_k6.csv");
    let err = check_golden(&golden, &census(7).hash()).unwrap_err();
    assert!(matches!(err, HarnessError::StaleGolden { .. }));
}

#[test]
fn census_above_limit_is_rejected() {
    assert_eq!(field_of(run(&census(9)).unwrap_err()), "k");
}

#[test]
fn thread_cap_from_environment() {
    std::env::set_var(THREADS_ENV, "2");
    assert_eq!(thread_count(Some(8)), 2);
    assert_eq!(thread_count(Some(1)), 1);
    std::env::remove_var(THREADS_ENV);
    assert_eq!(thread_count(Some(8)), 8);
}

proptest! {
    #[test]
    fn csv_round_trip(values in prop::collection::vec(-1e6f64..1e6, 1..30), labels in prop::collection::vec("[a-z]{1,6}", 30)) {
        let n = values.len();
        let mut t = ResultTable::new("t", "abc");
        t.real("x", "energy", values.clone())
            .integer("i", "", (0..n as i64).collect())
            .text("s", labels[..n].to_vec());
        let back = ResultTable::read_csv(t.to_csv_string().as_bytes(), "t").unwrap();
        prop_assert_eq!(back.reals("x").unwrap(), &values[..]);
        prop_assert_eq!(back.config_hash(), Some("abc"));
    }
}
