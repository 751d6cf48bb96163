//! `qlz`: one subcommand per experiment, plus the acceptance suite.
//!
//! Flags mirror the config keys (`--packet-width` sets `packet_width`);
//! values from `--config file.json` take precedence over flags.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qlz_core::harness::{
    criterion, init_threads, run, run_acceptance, AcceptanceReport, Experiment, ExperimentConfig,
    HarnessError, Suite,
};
use serde::Serialize;
use serde_json::Value;

const EXIT_CONFIG: u8 = 2;
const EXIT_ACCEPTANCE: u8 = 3;

#[derive(Parser)]
#[command(name = "qlz", version, about = "Random Schrödinger evolution, kinetic limits and graph expansions on the lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON config; its values override flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for tables, summary and field files.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Density of states, diffusion constant and self-energy on an energy list.
    Spectral {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        keys: SpectralKeys,
    },
    /// Split-step evolution of a packet in a random potential.
    Evolve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        keys: EvolveKeys,
    },
    /// Disorder-averaged quantum observables against the jump process.
    KineticCompare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        keys: CompareKeys,
    },
    /// Mean-square displacement of the jump process against 2 tr(D) T.
    Boltzmann {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        keys: BoltzmannKeys,
    },
    /// Graph amplitudes for every permutation of order k.
    Graphs {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        keys: GraphKeys,
    },
    /// Ladder and two-denominator integral bounds.
    LadderCheck {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        keys: LadderKeys,
    },
    /// Degree census of the permutation graphs.
    Census {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        keys: CensusKeys,
    },
    /// Acceptance suite; exits with status 3 when a criterion fails.
    Acceptance {
        /// fast (default) or full.
        #[arg(long, default_value = "fast")]
        suite: String,
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u8>,
        /// Write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Args, Serialize)]
struct SpectralKeys {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    energies: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    width: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<usize>,
}

#[derive(Args, Serialize)]
struct EvolveKeys {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    side: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[arg(long = "T")]
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    big_t: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    scaling: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dt: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    snapshots: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    disorder: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    packet_width: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    packet_momentum: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    wigner_epsilon: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<usize>,
}

#[derive(Args, Serialize)]
struct CompareKeys {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    side: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[arg(long = "T")]
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    big_t: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    scaling: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dt: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    bins: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    paths: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    disorder: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    packet_width: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    packet_momentum: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<usize>,
}

#[derive(Args, Serialize)]
struct BoltzmannKeys {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    energy: Option<f64>,
    #[arg(long = "T")]
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    big_t: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    times: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n_paths: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    width: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<usize>,
}

#[derive(Args, Serialize)]
struct GraphKeys {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[arg(long = "T")]
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    big_t: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    scaling: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    free: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    packet_width: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    packet_momentum: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<bool>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    side: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<usize>,
}

#[derive(Args, Serialize)]
struct LadderKeys {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    lambdas: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    eta_exponent: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    panel: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    ladder_constant: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    td_etas: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    td_grid: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<usize>,
}

#[derive(Args, Serialize)]
struct CensusKeys {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<usize>,
}

fn build_config<K: Serialize>(
    experiment: Experiment,
    common: &Common,
    keys: &K,
) -> Result<ExperimentConfig, HarnessError> {
    let mut config = ExperimentConfig::new(experiment);
    if let Value::Object(map) = serde_json::to_value(keys)? {
        config.parameters.extend(map);
    }
    config.output_path = common.output.clone();
    if let Some(path) = &common.config {
        let file = ExperimentConfig::load(path).map_err(|e| match e {
            HarnessError::Io(e) => HarnessError::invalid("config", format!("{}: {e}", path.display())),
            other => other,
        })?;
        config = config.overlay(file)?;
    }
    Ok(config)
}

fn run_experiment(config: ExperimentConfig) -> Result<(), HarnessError> {
    let output = run(&config)?;
    if config.output_path.is_some() {
        for f in &output.files {
            println!("{}", f.display());
        }
    } else {
        for t in &output.tables {
            println!("# table: {}", t.name);
            print!("{}", t.to_csv_string());
        }
    }
    eprintln!(
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({
            "experiment": output.experiment,
            "config_hash": output.config_hash,
            "wall_seconds": output.wall_seconds,
            "summary": output.summary,
        }))?
    );
    Ok(())
}

fn acceptance(suite: &str, only: Option<u8>, json: Option<PathBuf>, threads: Option<usize>) -> Result<bool, HarnessError> {
    let suite: Suite = suite.parse()?;
    init_threads(threads);
    let report = match only {
        Some(id) => AcceptanceReport { suite, outcomes: vec![criterion(id)] },
        None => run_acceptance(suite),
    };
    for line in report.lines() {
        println!("{line}");
    }
    if let Some(path) = json {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Acceptance { suite, criterion, json, threads } => {
            match acceptance(suite, *criterion, json.clone(), *threads) {
                Ok(true) => Ok(()),
                Ok(false) => return ExitCode::from(EXIT_ACCEPTANCE),
                Err(e) => Err(e),
            }
        }
        Command::Spectral { common, keys } => build_config(Experiment::Spectral, common, keys).and_then(run_experiment),
        Command::Evolve { common, keys } => build_config(Experiment::Evolve, common, keys).and_then(run_experiment),
        Command::KineticCompare { common, keys } => {
            build_config(Experiment::KineticCompare, common, keys).and_then(run_experiment)
        }
        Command::Boltzmann { common, keys } => build_config(Experiment::Boltzmann, common, keys).and_then(run_experiment),
        Command::Graphs { common, keys } => build_config(Experiment::Graphs, common, keys).and_then(run_experiment),
        Command::LadderCheck { common, keys } => {
            build_config(Experiment::LadderCheck, common, keys).and_then(run_experiment)
        }
        Command::Census { common, keys } => build_config(Experiment::Census, common, keys).and_then(run_experiment),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ HarnessError::ConfigInvalid { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
