//! Result records and plot-ready datasets. One `RunRecord` captures a single
//! solver run; a sweep writes the records as JSON lines plus RFC-4180 CSV
//! views (per-iteration traces, per-run runtime and infidelity scatters, and
//! a mean±stddev runtime summary). Wall-time columns are environment
//! dependent; every other byte is deterministic per seed.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulate::{BasisFamily, ExperimentSpec};
use crate::solvers::{Algorithm, SolverReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub experiment: ExperimentSpec,
    pub algorithm: Algorithm,
    /// (iteration, cost_per_outcome, seconds) triples.
    pub history: Vec<(usize, f64, f64)>,
    pub final_fidelity_true: Option<f64>,
    /// Pairwise fidelity against the other algorithms run on the same data.
    pub final_fidelity_crosscheck: BTreeMap<String, f64>,
    pub condition_number: f64,
    pub termination: String,
}

impl RunRecord {
    pub fn from_report(
        experiment: ExperimentSpec,
        algorithm: Algorithm,
        report: &SolverReport,
        final_fidelity_true: Option<f64>,
        condition_number: f64,
    ) -> Self {
        Self {
            experiment,
            algorithm,
            history: report
                .history
                .iter()
                .map(|h| (h.iteration, h.cost_per_outcome, h.seconds))
                .collect(),
            final_fidelity_true,
            final_fidelity_crosscheck: BTreeMap::new(),
            condition_number,
            termination: report.termination.to_string(),
        }
    }

    pub fn iterations(&self) -> usize {
        self.history.len()
    }

    pub fn final_cost_per_outcome(&self) -> Option<f64> {
        self.history.last().map(|h| h.1)
    }

    pub fn seconds(&self) -> f64 {
        self.history.last().map_or(0.0, |h| h.2)
    }
}

/// cos²β of the experiment's basis family; the Pauli MUBs sit at β = π/2,
/// i.e. cos²β = 0.
pub fn cos2beta(spec: &ExperimentSpec) -> f64 {
    match spec.basis_family {
        BasisFamily::PauliMub => 0.0,
        BasisFamily::BetaFamily { beta } => beta.cos() * beta.cos(),
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidInput(format!("{}: {e}", path.display()))
}

pub fn write_records_jsonl(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    for record in records {
        let line = serde_json::to_string(record)
            .map_err(|e| Error::InvalidInput(format!("record serialization: {e}")))?;
        writeln!(out, "{line}").map_err(|e| io_err(path, e))?;
    }
    out.flush().map_err(|e| io_err(path, e))
}

pub fn read_records_jsonl(path: &Path) -> Result<Vec<RunRecord>> {
    let file = BufReader::new(File::open(path).map_err(|e| io_err(path, e))?);
    let mut records = Vec::new();
    for (lineno, line) in file.lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| {
            Error::InvalidInput(format!("{}: line {}: {e}", path.display(), lineno + 1))
        })?;
        records.push(record);
    }
    Ok(records)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    csv::Writer::from_path(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn csv_fail(path: &Path, e: csv::Error) -> Error {
    Error::InvalidInput(format!("{}: {e}", path.display()))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Per-iteration cost traces: one row per history point of every run.
pub fn write_traces_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "run_id",
        "qubits",
        "cos2beta",
        "seed",
        "algorithm",
        "iteration",
        "cost_per_outcome",
        "seconds",
    ])
    .map_err(|e| csv_fail(path, e))?;
    for (run_id, record) in records.iter().enumerate() {
        for &(iteration, cost, seconds) in &record.history {
            w.write_record([
                run_id.to_string(),
                record.experiment.qubits.to_string(),
                cos2beta(&record.experiment).to_string(),
                record.experiment.seed.to_string(),
                record.algorithm.to_string(),
                iteration.to_string(),
                cost.to_string(),
                seconds.to_string(),
            ])
            .map_err(|e| csv_fail(path, e))?;
        }
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Per-run runtime scatter against system size: one row per run.
pub fn write_runtime_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "run_id",
        "qubits",
        "algorithm",
        "seed",
        "iterations",
        "termination",
        "final_cost_per_outcome",
        "seconds",
    ])
    .map_err(|e| csv_fail(path, e))?;
    for (run_id, record) in records.iter().enumerate() {
        w.write_record([
            run_id.to_string(),
            record.experiment.qubits.to_string(),
            record.algorithm.to_string(),
            record.experiment.seed.to_string(),
            record.iterations().to_string(),
            record.termination.clone(),
            fmt_opt(record.final_cost_per_outcome()),
            record.seconds().to_string(),
        ])
        .map_err(|e| csv_fail(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Mean ± sample stddev of the runtime, grouped by (qubits, algorithm) in
/// sorted order.
pub fn write_runtime_summary_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut groups: BTreeMap<(u32, String), Vec<f64>> = BTreeMap::new();
    for record in records {
        groups
            .entry((record.experiment.qubits, record.algorithm.to_string()))
            .or_default()
            .push(record.seconds());
    }
    let mut w = csv_writer(path)?;
    w.write_record(["qubits", "algorithm", "runs", "mean_seconds", "std_seconds"])
        .map_err(|e| csv_fail(path, e))?;
    for ((qubits, algorithm), seconds) in groups {
        let n = seconds.len() as f64;
        let mean = seconds.iter().sum::<f64>() / n;
        let std = if seconds.len() > 1 {
            (seconds.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        w.write_record([
            qubits.to_string(),
            algorithm,
            seconds.len().to_string(),
            mean.to_string(),
            std.to_string(),
        ])
        .map_err(|e| csv_fail(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Per-run infidelity and runtime against cos²β: one row per run.
pub fn write_infidelity_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "run_id",
        "cos2beta",
        "qubits",
        "algorithm",
        "seed",
        "condition_number",
        "infidelity",
        "seconds",
    ])
    .map_err(|e| csv_fail(path, e))?;
    for (run_id, record) in records.iter().enumerate() {
        w.write_record([
            run_id.to_string(),
            cos2beta(&record.experiment).to_string(),
            record.experiment.qubits.to_string(),
            record.algorithm.to_string(),
            record.experiment.seed.to_string(),
            record.condition_number.to_string(),
            fmt_opt(record.final_fidelity_true.map(|f| 1.0 - f)),
            record.seconds().to_string(),
        ])
        .map_err(|e| csv_fail(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}
