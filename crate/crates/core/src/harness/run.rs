use std::path::PathBuf;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::{Experiment, ExperimentConfig};
use super::table::ResultTable;
use super::{thread_count, HarnessError};
use crate::graphs::{
    build_m, classify, degree_census, e_eta_bound, envelope_constant, graph_sum_vs_disorder,
    AmplitudeEngine, AmplitudeParams, FreeKind, GraphPermutation, GraphSumConfig, MomentumAmplitude,
    MAX_CENSUS_K,
};
use crate::kinetic::{
    boltzmann_run, diffusion_closed_form, kinetic_comparison, msd_diffusive_check, quantum_run,
    ComparisonSetup, JumpProcess,
};
use crate::quantum::{
    io::{write_wave, write_wigner},
    rescaled_wigner, sample_disorder, DisorderKind, Evolver,
    TorusLattice, WaveFunction,
};
use crate::rng::{split_seed, stream_rng};
use crate::spectral::{
    ladder_integral, phi, two_denominator_bound_ratio, two_denominator_integral, Dispersion,
    Orientation,
    RenormalizedDispersion, ShellSpec, ThetaGrid, TWO_DENOMINATOR_TAU,
};
use crate::stats::{Estimate, Moments};

/// Constant C in the ladder bound 1 + Cλ^{1/4}, calibrated at λ = 0.5 on
/// the default panel (seed 20250101, 20 points) and frozen.
pub const LADDER_CONSTANT: f64 = 0.0;
pub const LADDER_PANEL_SEED: u64 = 20250101;
/// Energy-scale of the self-energy used in the ladder and
/// two-denominator checks.
pub const SINGULAR_THETA_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunOutput {
    pub experiment: Experiment,
    pub config_hash: String,
    pub tables: Vec<ResultTable>,
    pub summary: Value,
    pub wall_seconds: f64,
    pub files: Vec<PathBuf>,
}

impl RunOutput {
    pub fn table(&self, name: &str) -> Option<&ResultTable> {
        self.tables.iter().find(|t| t.name == name)
    }
}

struct Produced {
    tables: Vec<ResultTable>,
    summary: Value,
    blobs: Vec<(String, Vec<u8>)>,
}

/// Validates the config, runs the experiment on a pool of `threads`
/// workers (capped by the environment), and writes tables, a JSON summary
/// and any field files under `output_path` when one is set.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    config.validate()?;
    let start = Instant::now();
    let hash = config.hash();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(config.opt_usize("threads")?))
        .build()
        .map_err(|e| HarnessError::invalid("threads", e.to_string()))?;
    let produced = pool.install(|| match config.experiment {
        Experiment::Spectral => spectral(config, &hash),
        Experiment::Evolve => evolve(config, &hash),
        Experiment::KineticCompare => kinetic_compare(config, &hash),
        Experiment::Boltzmann => boltzmann(config, &hash),
        Experiment::Graphs => graphs(config, &hash),
        Experiment::LadderCheck => ladder_check(config, &hash),
        Experiment::Census => census(config, &hash),
    })?;
    let wall_seconds = start.elapsed().as_secs_f64();
    let mut files = Vec::new();
    if let Some(dir) = &config.output_path {
        std::fs::create_dir_all(dir)?;
        for t in &produced.tables {
            let path = dir.join(format!("{}.csv", t.name));
            t.save(&path)?;
            files.push(path);
        }
        for (name, bytes) in &produced.blobs {
            let path = dir.join(name);
            std::fs::write(&path, bytes)?;
            files.push(path);
        }
        let path = dir.join("summary.json");
        let doc = json!({
            "experiment": config.experiment,
            "config_hash": hash,
            "code_version": env!("CARGO_PKG_VERSION"),
            "wall_seconds": wall_seconds,
            "parameters": config.parameters,
            "summary": produced.summary,
        });
        std::fs::write(&path, serde_json::to_string_pretty(&doc)?)?;
        files.push(path);
    }
    Ok(RunOutput {
        experiment: config.experiment,
        config_hash: hash,
        tables: produced.tables,
        summary: produced.summary,
        wall_seconds,
        files,
    })
}

fn disorder_kind(c: &ExperimentConfig) -> Result<DisorderKind, HarnessError> {
    c.opt_str("disorder")?
        .map_or(Ok(DisorderKind::Gaussian), |s| s.parse().map_err(|e: String| HarnessError::invalid("disorder", e)))
}

/// Microscopic time from `t`, or from `T` through the declared scaling.
fn micro_time(c: &ExperimentConfig) -> Result<f64, HarnessError> {
    match (c.opt_f64("t")?, c.opt_f64("T")?) {
        (Some(t), _) => Ok(t),
        (None, Some(big)) => Ok(big / c.scaling()?.factor(c.f64("lambda")?)),
        (None, None) => Err(HarnessError::invalid("t", "required (or T with a scaling)")),
    }
}

fn momentum_vector(c: &ExperimentConfig, key: &str, dim: usize, default: &[f64]) -> Result<Vec<f64>, HarnessError> {
    let mut v = c.f64_list_or(key, default)?;
    if c.opt_f64_list(key)?.is_some() && v.len() != dim {
        return Err(HarnessError::invalid(key, format!("needs {dim} components, got {}", v.len())));
    }
    v.resize(dim, 0.0);
    Ok(v)
}

fn positive(key: &str, value: f64) -> Result<f64, HarnessError> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(HarnessError::invalid(key, format!("must be positive, got {value}")))
    }
}

fn spectral(c: &ExperimentConfig, hash: &str) -> Result<Produced, HarnessError> {
    let dim = c.usize_or("dim", 3)?;
    if dim == 0 {
        return Err(HarnessError::invalid("dim", "must be at least 1"));
    }
    let disp = Dispersion::<f64>::new(dim);
    let band = disp.band_max();
    let default_energies: Vec<f64> = (1..12).map(|i| band * i as f64 / 12.0).collect();
    let energies = c.f64_list_or("energies", &default_energies)?;
    let budget = c.u64_or("budget", 10_000_000)?;
    let epsilon = positive("epsilon", c.f64_or("epsilon", SINGULAR_THETA_EPSILON)?)?;
    let seed = c.u64("seed")?;
    let theta = ThetaGrid::new(dim, epsilon, None)?;
    let mut phis = Vec::new();
    let mut ds = Vec::new();
    let mut theta_re = Vec::new();
    let mut theta_im = Vec::new();
    for (i, &e) in energies.iter().enumerate() {
        let mut shell = ShellSpec::with_default_width(&disp, e, budget);
        if let Some(w) = c.opt_f64("width")? {
            shell = shell.with_width(positive("width", w)?);
        }
        phis.push(phi(&disp, &shell, split_seed(seed, i as u64)));
        ds.push(match diffusion_closed_form(&disp, &shell, split_seed(seed, 1000 + i as u64)) {
            Ok(d) => d.scalar(),
            Err(_) => Estimate { value: f64::NAN, stderr: f64::NAN, n: 0 },
        });
        let th = theta.eval(e);
        theta_re.push(th.re);
        theta_im.push(th.im);
    }
    let mut t = ResultTable::new("spectral", hash);
    t.real("energy", "", energies.clone())
        .estimates("phi", "1/energy", &phis)
        .estimates("diffusion", "site^2/time", &ds)
        .real("theta_re", "", theta_re)
        .real("theta_im", "", theta_im.clone())
        .real("minus_pi_phi", "", phis.iter().map(|p| -std::f64::consts::PI * p.value).collect());
    let worst = theta_im
        .iter()
        .zip(&phis)
        .filter(|(_, p)| p.value > 0.05)
        .map(|(im, p)| (im + std::f64::consts::PI * p.value).abs() / (std::f64::consts::PI * p.value))
        .fold(0.0, f64::max);
    Ok(Produced {
        tables: vec![t],
        summary: json!({ "dim": dim, "budget": budget, "epsilon": epsilon, "max_theta_relative_gap": worst }),
        blobs: vec![],
    })
}

fn evolve(c: &ExperimentConfig, hash: &str) -> Result<Produced, HarnessError> {
    let dim = c.usize_or("dim", 3)?;
    let side = c.usize("side")?;
    let lambda = c.f64("lambda")?;
    let t = micro_time(c)?;
    let dt = positive("dt", c.f64_or("dt", 0.02)?)?;
    let samples = c.usize_or("samples", 1)?.max(1);
    let snapshots = c.usize_or("snapshots", 10)?.max(1);
    let seed = c.u64("seed")?;
    let kind = disorder_kind(c)?;
    let width = positive("packet_width", c.f64_or("packet_width", 2.0)?)?;
    let p0 = momentum_vector(c, "packet_momentum", dim, &[0.2, 0.05, 0.0])?;
    let lattice = TorusLattice::new(side, dim)?;
    let psi0 = WaveFunction::gaussian_packet(lattice, &vec![0.0; dim], width, &p0)?;
    let times: Vec<f64> = (0..=snapshots).map(|i| t * i as f64 / snapshots as f64).collect();
    let mut norms = vec![Moments::new(); times.len()];
    let mut moments = vec![Moments::new(); times.len()];
    let mut last = None;
    for s in 0..samples {
        let v = sample_disorder(&lattice, kind, split_seed(seed, s as u64));
        let ev = Evolver::new(lattice, Some(&v), lambda, dt)?;
        let states = ev.snapshots(&psi0, &times)?;
        for (k, psi) in states.iter().enumerate() {
            norms[k].push(psi.norm());
            moments[k].push(psi.second_moment());
        }
        if s == 0 {
            last = states.into_iter().last();
        }
    }
    let est = |m: &[Moments]| m.iter().map(Moments::estimate).collect::<Vec<_>>();
    let mut table = ResultTable::new("evolve", hash);
    table
        .real("time", "time", times.clone())
        .estimates("norm", "", &est(&norms))
        .estimates("second_moment", "site^2", &est(&moments));
    let last = last.expect("at least one sample");
    let mut blobs = Vec::new();
    let mut bytes = Vec::new();
    write_wave(&mut bytes, &last)?;
    blobs.push(("psi_final.qlzf".to_string(), bytes));
    if let Some(eps) = c.opt_f64("wigner_epsilon")? {
        let field = rescaled_wigner(&last, positive("wigner_epsilon", eps)?)?;
        let mut bytes = Vec::new();
        write_wigner(&mut bytes, &field)?;
        blobs.push(("wigner_final.qlzf".to_string(), bytes));
    }
    let drift = norms.iter().map(|m| (m.mean() - psi0.norm()).abs()).fold(0.0, f64::max);
    Ok(Produced {
        tables: vec![table],
        summary: json!({ "t": t, "steps_dt": dt, "samples": samples, "max_norm_drift": drift }),
        blobs,
    })
}

fn comparison_setup(c: &ExperimentConfig) -> Result<ComparisonSetup, HarnessError> {
    let dim = c.usize_or("dim", 3)?;
    let lambda = positive("lambda", c.f64("lambda")?)?;
    let scaling = c.scaling()?;
    let eps = scaling.factor(lambda);
    let kinetic_time = match (c.opt_f64("T")?, c.opt_f64("t")?) {
        (Some(big), _) => big,
        (None, Some(t)) => eps * t,
        (None, None) => return Err(HarnessError::invalid("T", "required (or t)")),
    };
    Ok(ComparisonSetup {
        side: c.usize_or("side", 64)?,
        dim,
        lambda,
        epsilon: Some(eps),
        kinetic_time,
        samples: c.usize_or("samples", 200)?,
        dt: positive("dt", c.f64_or("dt", 0.05)?)?,
        bins: c.usize_or("bins", 20)?,
        paths: c.usize_or("paths", 200_000)?,
        disorder: disorder_kind(c)?,
        packet_width: positive("packet_width", c.f64_or("packet_width", 4.0)?)?,
        packet_momentum: momentum_vector(c, "packet_momentum", dim, &[0.2, 0.05, 0.0])?,
        seed: c.u64("seed")?,
    })
}

fn kinetic_compare(c: &ExperimentConfig, hash: &str) -> Result<Produced, HarnessError> {
    let setup = comparison_setup(c)?;
    let q = quantum_run(&setup)?;
    let b = boltzmann_run(&setup)?;
    let report = kinetic_comparison(&q, &b)?;
    let mut rows = ResultTable::new("kinetic_compare", hash);
    rows.text("observable", report.rows.iter().map(|r| r.observable.clone()).collect())
        .real("quantum", "", report.rows.iter().map(|r| r.quantum).collect())
        .real("boltzmann", "", report.rows.iter().map(|r| r.boltzmann).collect())
        .real("relative", "", report.rows.iter().map(|r| r.relative).collect());
    let band = 2.0 * setup.dim as f64;
    let width = band / setup.bins as f64;
    let mut hist = ResultTable::new("energy_histogram", hash);
    hist.real("bin_lo", "energy", (0..setup.bins).map(|i| i as f64 * width).collect())
        .real("bin_hi", "energy", (0..setup.bins).map(|i| (i + 1) as f64 * width).collect())
        .estimates("quantum", "probability", &q.energy_histogram)
        .estimates("boltzmann", "probability", &b.energy_histogram);
    Ok(Produced {
        tables: vec![rows, hist],
        summary: json!({
            "energy_tv": report.energy_tv,
            "epsilon": setup.epsilon(),
            "microscopic_time": setup.microscopic_time(),
            "samples": setup.samples,
        }),
        blobs: vec![],
    })
}

fn boltzmann(c: &ExperimentConfig, hash: &str) -> Result<Produced, HarnessError> {
    let dim = c.usize_or("dim", 3)?;
    let energy = c.f64("energy")?;
    let t_max = positive("T", c.f64("T")?)?;
    let points = c.usize_or("points", 8)?.max(2);
    let default_times: Vec<f64> = (1..=points).map(|i| t_max * i as f64 / points as f64).collect();
    let times = c.f64_list_or("times", &default_times)?;
    let n_paths = c.usize_or("n_paths", 10_000)?;
    let budget = c.u64_or("budget", 10_000_000)?;
    let seed = c.u64("seed")?;
    let disp = Dispersion::<f64>::new(dim);
    let mut shell = ShellSpec::with_default_width(&disp, energy, budget);
    if let Some(w) = c.opt_f64("width")? {
        shell = shell.with_width(positive("width", w)?);
    }
    let dm = diffusion_closed_form(&disp, &shell, split_seed(seed, 1))?;
    let process = JumpProcess::new(disp, shell, split_seed(seed, 2))?;
    let report = msd_diffusive_check(&process, &dm, &times, n_paths, split_seed(seed, 3))?;
    let msd: Vec<Estimate> = report.rows.iter().map(|r| r.msd).collect();
    let mut t = ResultTable::new("boltzmann", hash);
    t.real("time", "time", report.rows.iter().map(|r| r.time).collect())
        .real("mean_free_times", "", report.rows.iter().map(|r| r.time * process.rate()).collect())
        .estimates("msd", "site^2", &msd)
        .real("prediction", "site^2", report.rows.iter().map(|r| r.prediction).collect());
    Ok(Produced {
        tables: vec![t],
        summary: json!({
            "energy": energy,
            "diffusion": dm.scalar(),
            "rate": process.rate(),
            "fitted_slope": report.fit.slope,
            "predicted_slope": report.predicted_slope,
            "slope_relative_error": report.slope_relative_error(),
            "ks_statistic": report.ks.statistic,
            "ks_p_value": report.ks.p_value,
        }),
        blobs: vec![],
    })
}

fn graphs(c: &ExperimentConfig, hash: &str) -> Result<Produced, HarnessError> {
    let k = c.usize("k")?;
    let dim = c.usize_or("dim", 3)?;
    let lambda = c.f64("lambda")?;
    let t = micro_time(c)?;
    let mut params = AmplitudeParams::new(dim, lambda, t, c.usize_or("grid", 8)?);
    params.eta = c.opt_f64("eta")?;
    params.free = match c.opt_str("free")?.as_deref() {
        None | Some("renormalized") => FreeKind::Renormalized,
        Some("bare") => FreeKind::Bare,
        Some(other) => return Err(HarnessError::invalid("free", format!("expected bare or renormalized, got {other:?}"))),
    };
    let width = positive("packet_width", c.f64_or("packet_width", 1.0)?)?;
    let p0 = momentum_vector(c, "packet_momentum", dim, &[0.21, 0.07, 0.0])?;
    let psi = MomentumAmplitude::from_packet(dim, params.grid, width, &p0)?;
    let with_bound = c.opt_bool("bound")?.unwrap_or(k <= crate::graphs::MAX_BOUND_K);
    let engine = AmplitudeEngine::new(k, &params)?;
    let mut table = ResultTable::new("graphs", hash);
    let (mut sig, mut deg, mut re, mut im, mut err, mut bound, mut det) =
        (vec![], vec![], vec![], vec![], vec![], vec![], vec![]);
    for sigma in GraphPermutation::all(k) {
        let v = engine.value(&sigma, &psi)?;
        sig.push(v.sigma.clone());
        deg.push(classify(&sigma).degree as i64);
        det.push(build_m(&sigma).determinant());
        re.push(v.re);
        im.push(v.im);
        err.push(v.error);
        bound.push(if with_bound { e_eta_bound(k, &sigma, &params)? } else { f64::NAN });
    }
    table
        .text("sigma", sig)
        .integer("degree", "", deg)
        .integer("det_m", "", det)
        .real("re", "", re)
        .real("im", "", im)
        .real("error", "", err)
        .real("e_eta", "", bound);
    let mut tables = vec![table];
    let mut summary = json!({ "k": k, "eta": params.eta(), "t": t, "grid": params.grid });
    if let Some(samples) = c.opt_usize("oracle_samples")? {
        let oracle = GraphSumConfig {
            dim,
            packet_width: width,
            packet_momentum: p0.clone(),
            ..GraphSumConfig::new(k, lambda, t, c.usize_or("side", 8)?, samples, c.u64("seed")?)
        };
        let r = graph_sum_vs_disorder(&oracle)?;
        let mut o = ResultTable::new("graph_sum", hash);
        o.real("monte_carlo", "", vec![r.monte_carlo.value])
            .real("monte_carlo_err", "", vec![r.monte_carlo.stderr])
            .real("graph_sum", "", vec![r.graph_sum])
            .real("gate", "", vec![r.gate])
            .real("z", "", vec![r.z_score()]);
        summary["oracle_z"] = json!(r.z_score());
        tables.push(o);
    }
    Ok(Produced { tables, summary, blobs: vec![] })
}

/// One point of the ladder panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderPoint {
    pub alpha: f64,
    pub beta: f64,
    pub w: Vec<f64>,
    pub orientation: Orientation,
}

/// `size` points with α in the bulk of the band, β within 0.3 of α and
/// small shifts w, from a fixed seed.
pub fn ladder_panel(dim: usize, size: usize, seed: u64) -> Vec<LadderPoint> {
    let band = 2.0 * dim as f64;
    let mut rng = stream_rng(seed, 0);
    (0..size)
        .map(|_| {
            let alpha = rng.gen_range(0.1 * band..0.9 * band);
            let beta = alpha + rng.gen_range(-0.3..0.3);
            let w = (0..dim).map(|_| rng.gen_range(-0.1..0.1)).collect();
            let orientation = if rng.gen_bool(0.5) { Orientation::Plus } else { Orientation::Minus };
            LadderPoint { alpha, beta, w, orientation }
        })
        .collect()
}

/// Ladder integrals over a panel at η = λ^{eta_exponent}.
pub fn ladder_values(
    dim: usize,
    lambda: f64,
    eta_exponent: f64,
    grid: usize,
    panel: &[LadderPoint],
) -> Result<Vec<f64>, HarnessError> {
    let omega = RenormalizedDispersion::new(Dispersion::<f64>::new(dim), lambda, SINGULAR_THETA_EPSILON)?;
    let eta = lambda.powf(eta_exponent);
    panel
        .iter()
        .map(|p| Ok(ladder_integral(&omega, p.alpha, p.beta, &p.w, p.orientation, eta, grid)?))
        .collect()
}

/// max(0, max_panel (v − 1)/λ^{1/4}).
pub fn calibrate_ladder_constant(lambda: f64, values: &[f64]) -> f64 {
    values.iter().map(|v| (v - 1.0) / lambda.powf(0.25)).fold(0.0, f64::max)
}

/// Fixed two-denominator panel (α, β, w) with w away from the critical set.
pub fn two_denominator_panel(dim: usize) -> Vec<(f64, f64, Vec<f64>)> {
    let w = |a: f64, b: f64, c: f64| {
        let mut v = vec![a, b, c];
        v.resize(dim, 0.0);
        v
    };
    vec![
        (3.0, 3.0, w(0.1, 0.0, 0.0)),
        (2.0, 2.2, w(0.05, 0.05, 0.0)),
        (4.5, 4.4, w(0.15, -0.1, 0.05)),
    ]
}

/// Relative slack on both two-denominator scaling checks.
pub const TWO_DENOMINATOR_SLACK: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoDenominatorRow {
    pub point: usize,
    pub eta: f64,
    /// 1 for the panel shift w, 0.5 for w/2.
    pub w_scale: f64,
    pub value: f64,
    /// value·|w|·η^τ
    pub bound_ratio: f64,
    /// (v(η)/v(η_prev)) / (η_prev/η)^τ at the same w; NaN on the first η.
    pub eta_growth: f64,
    /// v(w/2)|w/2| / (v(w)|w|) at the same η; NaN on unscaled rows.
    pub w_growth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoDenominatorScan {
    pub rows: Vec<TwoDenominatorRow>,
    pub worst_eta_growth: f64,
    pub worst_w_growth: f64,
}

impl TwoDenominatorScan {
    /// Both growth factors within 1 + slack.
    pub fn holds(&self) -> bool {
        self.worst_eta_growth <= 1.0 + TWO_DENOMINATOR_SLACK
            && self.worst_w_growth <= 1.0 + TWO_DENOMINATOR_SLACK
    }
}

/// Bare two-denominator integrals over the fixed panel, at each η and at
/// shifts w and w/2.
pub fn two_denominator_scan(dim: usize, etas: &[f64], grid: usize) -> Result<TwoDenominatorScan, HarnessError> {
    let omega = RenormalizedDispersion::bare(Dispersion::<f64>::new(dim));
    let mut rows = Vec::new();
    let mut worst_eta: f64 = f64::NEG_INFINITY;
    let mut worst_w: f64 = f64::NEG_INFINITY;
    for (point, (alpha, beta, w)) in two_denominator_panel(dim).into_iter().enumerate() {
        let half: Vec<f64> = w.iter().map(|x| x / 2.0).collect();
        let mut prev: Option<(f64, f64)> = None;
        for &eta in etas {
            let v = two_denominator_integral(&omega, alpha, beta, &w, eta, grid)?;
            let eta_growth = prev.map_or(f64::NAN, |(pe, pv)| (v / pv) / (pe / eta).powf(TWO_DENOMINATOR_TAU));
            if eta_growth.is_finite() {
                worst_eta = worst_eta.max(eta_growth);
            }
            prev = Some((eta, v));
            let vh = two_denominator_integral(&omega, alpha, beta, &half, eta, grid)?;
            let dist = |x: &[f64]| omega.dispersion().critical_distance(x);
            let w_growth = vh * dist(&half) / (v * dist(&w));
            worst_w = worst_w.max(w_growth);
            rows.push(TwoDenominatorRow {
                point,
                eta,
                w_scale: 1.0,
                value: v,
                bound_ratio: two_denominator_bound_ratio(&omega, v, &w, eta),
                eta_growth,
                w_growth: f64::NAN,
            });
            rows.push(TwoDenominatorRow {
                point,
                eta,
                w_scale: 0.5,
                value: vh,
                bound_ratio: two_denominator_bound_ratio(&omega, vh, &half, eta),
                eta_growth: f64::NAN,
                w_growth,
            });
        }
    }
    Ok(TwoDenominatorScan { rows, worst_eta_growth: worst_eta, worst_w_growth: worst_w })
}

fn ladder_check(c: &ExperimentConfig, hash: &str) -> Result<Produced, HarnessError> {
    let dim = c.usize_or("dim", 3)?;
    let lambdas = c.f64_list_or("lambdas", &[0.5, 0.35, 0.25])?;
    let eta_exponent = c.f64_or("eta_exponent", 2.5)?;
    let grid = c.usize_or("grid", 96)?;
    let panel_size = c.usize_or("panel", 20)?;
    let seed = c.u64("seed")?;
    let constant = c.f64_or("ladder_constant", LADDER_CONSTANT)?;
    let td_etas = c.f64_list_or("td_etas", &[0.2, 0.1, 0.05])?;
    let td_grid = c.usize_or("td_grid", 256)?;
    let panel = ladder_panel(dim, panel_size, seed);

    let mut ladder = ResultTable::new("ladder", hash);
    let mut cols: (Vec<f64>, Vec<i64>, Vec<f64>, Vec<f64>, Vec<String>, Vec<String>, Vec<f64>, Vec<f64>) =
        Default::default();
    let mut sups = Vec::new();
    let mut calibrated = None;
    let mut all_ok = true;
    for &lambda in &lambdas {
        let values = ladder_values(dim, lambda, eta_exponent, grid, &panel)?;
        let bound = 1.0 + constant * lambda.powf(0.25);
        for (i, (p, v)) in panel.iter().zip(&values).enumerate() {
            cols.0.push(lambda);
            cols.1.push(i as i64);
            cols.2.push(p.alpha);
            cols.3.push(p.beta);
            cols.4.push(p.w.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" "));
            cols.5.push(format!("{:?}", p.orientation).to_lowercase());
            cols.6.push(*v);
            cols.7.push(bound);
            all_ok &= *v <= bound;
        }
        sups.push(values.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        calibrated.get_or_insert_with(|| calibrate_ladder_constant(lambda, &values));
    }
    ladder
        .real("lambda", "", cols.0)
        .integer("point", "", cols.1)
        .real("alpha", "energy", cols.2)
        .real("beta", "energy", cols.3)
        .text("w", cols.4)
        .text("orientation", cols.5)
        .real("value", "", cols.6)
        .real("bound", "", cols.7);

    let scan = two_denominator_scan(dim, &td_etas, td_grid)?;
    let mut td = ResultTable::new("two_denominator", hash);
    td.integer("point", "", scan.rows.iter().map(|r| r.point as i64).collect())
        .real("eta", "", scan.rows.iter().map(|r| r.eta).collect())
        .real("w_scale", "", scan.rows.iter().map(|r| r.w_scale).collect())
        .real("value", "", scan.rows.iter().map(|r| r.value).collect())
        .real("bound_ratio", "", scan.rows.iter().map(|r| r.bound_ratio).collect())
        .real("eta_growth", "", scan.rows.iter().map(|r| r.eta_growth).collect())
        .real("w_growth", "", scan.rows.iter().map(|r| r.w_growth).collect());
    Ok(Produced {
        tables: vec![ladder, td],
        summary: json!({
            "ladder_constant": constant,
            "calibrated_at_first_lambda": calibrated,
            "sup_by_lambda": lambdas.iter().zip(&sups).map(|(l, s)| json!({"lambda": l, "sup": s})).collect::<Vec<_>>(),
            "ladder_bound_holds": all_ok,
            "two_denominator_worst_eta_growth": scan.worst_eta_growth,
            "two_denominator_worst_w_growth": scan.worst_w_growth,
            "two_denominator_tau": TWO_DENOMINATOR_TAU,
            "two_denominator_slack": TWO_DENOMINATOR_SLACK,
            "two_denominator_holds": scan.holds(),
        }),
        blobs: vec![],
    })
}

fn census(c: &ExperimentConfig, hash: &str) -> Result<Produced, HarnessError> {
    let k = c.usize("k")?;
    if k > MAX_CENSUS_K {
        return Err(HarnessError::invalid("k", format!("census enumerates k ≤ {MAX_CENSUS_K}")));
    }
    let mut all = std::collections::BTreeMap::new();
    let (mut ks, mut degrees, mut counts) = (vec![], vec![], vec![]);
    for kk in 1..=k {
        let census = degree_census(kk)?;
        for (&d, &n) in &census {
            ks.push(kk as i64);
            degrees.push(d as i64);
            counts.push(n as i64);
        }
        all.insert(kk, census);
    }
    let mut t = ResultTable::new("census", hash);
    t.integer("k", "", ks).integer("degree", "", degrees).integer("count", "", counts);
    Ok(Produced {
        tables: vec![t],
        summary: json!({ "k": k, "envelope_constant": envelope_constant(&all) }),
        blobs: vec![],
    })
}
