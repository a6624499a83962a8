//! File-based command-line pipeline.
//!
//! Exit codes are a stable contract: 0 success (reconstruction converged),
//! 2 malformed input (bad file, bad flag, unknown algorithm), 3 iteration cap
//! reached, 4 numerical failure.

mod bench;
mod bundle;
mod records;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::metrics::fidelity;
use crate::simulate::{self, ExperimentSpec};
use crate::solvers::{solve, Algorithm, SolverConfig, Termination};
use crate::types::estimate_scale;

pub use bench::{run_sweep, SweepPlan};
pub use bundle::{ClicksPayload, ComplexMatrixPayload, DataBundle, EnsemblePayload};
pub use records::{
    cos2beta, read_records_jsonl, write_infidelity_csv, write_records_jsonl, write_runtime_csv,
    write_runtime_summary_csv, write_traces_csv, RunRecord,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_MAX_ITERATIONS: i32 = 3;
pub const EXIT_NUMERICAL_FAILURE: i32 = 4;

#[derive(Parser)]
#[command(
    name = "tomo",
    about = "Simulate photon-counting tomography experiments and reconstruct \
             the state by maximum likelihood",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a state, ensemble, and click vector from an experiment spec
    /// and write them as one bundle file.
    Simulate {
        /// Experiment spec (JSON: qubits, basis_family, events_per_outcome,
        /// purity, seed).
        #[arg(long)]
        spec: PathBuf,
        /// Output bundle path (JSON with base64 float64 arrays).
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct the state from a bundle with one algorithm and report the
    /// run.
    Reconstruct {
        /// Bundle file produced by `simulate` (or compatible).
        #[arg(long)]
        bundle: PathBuf,
        /// One of: pgd, pgdm, fista, pgdb, dia.
        #[arg(long)]
        algorithm: String,
        /// Iteration cap override [default: 20000; pgdb 5000; dia 2000].
        #[arg(long = "max-iter")]
        max_iter: Option<usize>,
        /// Stopping threshold override [default: 1e-5; fista/dia 1e-6].
        #[arg(long)]
        threshold: Option<f64>,
        /// Optional path for the run record (JSON).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep (qubits × β × trials × algorithms) and write plot-ready
    /// datasets.
    Bench {
        /// Sweep plan (JSON: seed, trials, qubits, algorithms; optional
        /// events_per_outcome, purity, betas).
        #[arg(long)]
        sweep: PathBuf,
        /// Output directory for records.jsonl and the CSV datasets.
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
        /// Worker thread count [default: $TOMO_WORKERS, else up to 4].
        #[arg(long, env = "TOMO_WORKERS")]
        workers: Option<usize>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn bad_input(message: impl Into<String>) -> Self {
        Self { code: EXIT_BAD_INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numerical(_) | Error::IllConditioned(_) => EXIT_NUMERICAL_FAILURE,
            _ => EXIT_BAD_INPUT,
        };
        Self { code, message: e.to_string() }
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

fn dispatch(command: Command) -> std::result::Result<i32, Failure> {
    match command {
        Command::Simulate { spec, out } => cmd_simulate(&spec, &out),
        Command::Reconstruct { bundle, algorithm, max_iter, threshold, out } => {
            cmd_reconstruct(&bundle, &algorithm, max_iter, threshold, out.as_deref())
        }
        Command::Bench { sweep, out_dir, workers } => cmd_bench(&sweep, &out_dir, workers),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::bad_input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::bad_input(format!("{}: {e}", path.display())))
}

fn write_json_pretty<T: serde::Serialize>(
    path: &Path,
    value: &T,
) -> std::result::Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::bad_input(format!("serialization: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Failure::bad_input(format!("{}: {e}", path.display())))
}

fn cmd_simulate(spec_path: &Path, out: &Path) -> std::result::Result<i32, Failure> {
    let spec: ExperimentSpec = read_json(spec_path)?;
    spec.validate().map_err(|e| Failure::bad_input(format!("{}: {e}", spec_path.display())))?;
    let (state, ensemble, clicks) = simulate::generate(&spec)?;
    let bundle = DataBundle::pack(&spec, &state, &ensemble, &clicks);
    write_json_pretty(out, &bundle)?;
    println!("wrote bundle: {} ({} outcomes, dim {})", out.display(), ensemble.len(), state.dim());
    Ok(EXIT_OK)
}

fn cmd_reconstruct(
    bundle_path: &Path,
    algorithm: &str,
    max_iter: Option<usize>,
    threshold: Option<f64>,
    out: Option<&Path>,
) -> std::result::Result<i32, Failure> {
    let algorithm: Algorithm = algorithm.parse().map_err(|e: Error| Failure::bad_input(e.to_string()))?;
    let bundle: DataBundle = read_json(bundle_path)?;
    let (true_state, ensemble, mut clicks) = bundle
        .unpack()
        .map_err(|e| Failure::bad_input(format!("{}: {e}", bundle_path.display())))?;
    if clicks.scale().is_none() {
        estimate_scale(&mut clicks, &ensemble, 0)?;
    }

    let mut config = SolverConfig::new(algorithm);
    if let Some(n) = max_iter {
        config.max_iterations = n;
    }
    if let Some(t) = threshold {
        config.stop_threshold = t;
    }

    let report = solve(&ensemble, &clicks, &config)?;
    let fid = fidelity(&report.final_state, &true_state)?;
    let condition = simulate::condition_number(&ensemble);
    let record =
        RunRecord::from_report(bundle.experiment, algorithm, &report, Some(fid), condition);

    println!("algorithm: {algorithm}");
    println!("iterations: {}", report.iterations());
    println!("termination: {}", report.termination);
    println!("final_cost_per_outcome: {}", report.final_cost_per_outcome());
    println!("final_fidelity_true: {fid}");
    println!("condition_number: {condition}");

    if let Some(path) = out {
        write_json_pretty(path, &record)?;
        println!("wrote record: {}", path.display());
    }

    Ok(match report.termination {
        Termination::Converged => EXIT_OK,
        Termination::MaxIterations => EXIT_MAX_ITERATIONS,
        Termination::NumericalFailure => EXIT_NUMERICAL_FAILURE,
    })
}

fn cmd_bench(
    sweep_path: &Path,
    out_dir: &Path,
    workers: Option<usize>,
) -> std::result::Result<i32, Failure> {
    let plan: SweepPlan = read_json(sweep_path)?;
    plan.validate().map_err(|e| Failure::bad_input(format!("{}: {e}", sweep_path.display())))?;
    let workers = workers.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get().min(4))
    });
    let records = run_sweep(&plan, out_dir, workers)?;
    println!("wrote {} run records to {}", records.len(), out_dir.display());
    Ok(EXIT_OK)
}
