//! Sweep driver: expands a sweep plan into a cross-product of runs, executes
//! them on a small worker pool, cross-checks the final states of algorithms
//! that saw the same data, and writes the datasets.
//!
//! Every run derives its data seed from (plan seed, qubits, β, trial) only —
//! never from the algorithm — so all algorithms at one grid point reconstruct
//! the identical experiment and their final states are comparable. Results
//! are deterministic per seed regardless of worker count.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::fidelity;
use crate::simulate::{self, BasisFamily, ExperimentSpec};
use crate::solvers::{solve, Algorithm, SolverConfig};
use crate::types::DensityMatrix;

use super::records::{
    write_infidelity_csv, write_records_jsonl, write_runtime_csv, write_runtime_summary_csv,
    write_traces_csv, RunRecord,
};

fn default_events_per_outcome() -> f64 {
    10_000.0
}

fn default_purity() -> f64 {
    0.5
}

fn default_betas() -> Vec<f64> {
    vec![std::f64::consts::FRAC_PI_2]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub seed: u64,
    #[serde(default = "default_events_per_outcome")]
    pub events_per_outcome: f64,
    #[serde(default = "default_purity")]
    pub purity: f64,
    pub trials: usize,
    pub qubits: Vec<u32>,
    #[serde(default = "default_betas")]
    pub betas: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("field `trials`: must be at least 1".into()));
        }
        if self.qubits.is_empty() {
            return Err(Error::InvalidInput("field `qubits`: must list at least one size".into()));
        }
        if self.betas.is_empty() {
            return Err(Error::InvalidInput("field `betas`: must list at least one angle".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidInput(
                "field `algorithms`: must list at least one algorithm".into(),
            ));
        }
        Ok(())
    }

    pub fn jobs(&self) -> Vec<Job> {
        let mut jobs = Vec::new();
        for &qubits in &self.qubits {
            for &beta in &self.betas {
                for trial in 0..self.trials {
                    let data_seed = data_seed(self.seed, qubits, beta, trial as u64);
                    for &algorithm in &self.algorithms {
                        jobs.push(Job {
                            experiment: ExperimentSpec {
                                qubits,
                                basis_family: BasisFamily::BetaFamily { beta },
                                events_per_outcome: self.events_per_outcome,
                                purity: self.purity,
                                seed: data_seed,
                            },
                            algorithm,
                        });
                    }
                }
            }
        }
        jobs
    }
}

#[derive(Debug, Clone)]
pub struct Job {
    pub experiment: ExperimentSpec,
    pub algorithm: Algorithm,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn data_seed(seed: u64, qubits: u32, beta: f64, trial: u64) -> u64 {
    let mut h = splitmix(seed);
    h = splitmix(h ^ u64::from(qubits));
    h = splitmix(h ^ beta.to_bits());
    splitmix(h ^ trial)
}

struct JobOutput {
    record: RunRecord,
    final_state: Option<DensityMatrix>,
}

fn run_job(job: &Job) -> JobOutput {
    match try_run_job(job) {
        Ok(out) => out,
        Err(e) => JobOutput {
            record: RunRecord {
                experiment: job.experiment.clone(),
                algorithm: job.algorithm,
                history: Vec::new(),
                final_fidelity_true: None,
                final_fidelity_crosscheck: Default::default(),
                condition_number: 0.0,
                termination: format!("Error: {e}"),
            },
            final_state: None,
        },
    }
}

fn try_run_job(job: &Job) -> Result<JobOutput> {
    let (true_state, ensemble, clicks) = simulate::generate(&job.experiment)?;
    let config = SolverConfig::new(job.algorithm);
    let report = solve(&ensemble, &clicks, &config)?;
    let fid = fidelity(&report.final_state, &true_state)?;
    let condition = simulate::condition_number(&ensemble);
    Ok(JobOutput {
        record: RunRecord::from_report(
            job.experiment.clone(),
            job.algorithm,
            &report,
            Some(fid),
            condition,
        ),
        final_state: Some(report.final_state.clone()),
    })
}

fn run_pool(jobs: &[Job], workers: usize) -> Vec<JobOutput> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<JobOutput>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    let workers = workers.clamp(1, jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let out = run_job(&jobs[i]);
                slots.lock().unwrap()[i] = Some(out);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(Option::unwrap).collect()
}

/// Fills `final_fidelity_crosscheck` for every pair of runs that share an
/// experiment (same data seed, different algorithm).
fn crosscheck(outputs: &mut [JobOutput]) {
    for a in 0..outputs.len() {
        for b in (a + 1)..outputs.len() {
            if outputs[a].record.experiment != outputs[b].record.experiment {
                continue;
            }
            let (sa, sb) = (&outputs[a].final_state, &outputs[b].final_state);
            let (Some(sa), Some(sb)) = (sa, sb) else { continue };
            let Ok(f) = fidelity(sa, sb) else { continue };
            let (name_a, name_b) =
                (outputs[a].record.algorithm.to_string(), outputs[b].record.algorithm.to_string());
            outputs[a].record.final_fidelity_crosscheck.insert(name_b, f);
            outputs[b].record.final_fidelity_crosscheck.insert(name_a, f);
        }
    }
}

pub fn run_sweep(plan: &SweepPlan, out_dir: &Path, workers: usize) -> Result<Vec<RunRecord>> {
    plan.validate()?;
    let jobs = plan.jobs();
    let mut outputs = run_pool(&jobs, workers);
    crosscheck(&mut outputs);
    let records: Vec<RunRecord> = outputs.into_iter().map(|o| o.record).collect();

    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", out_dir.display())))?;
    write_records_jsonl(&out_dir.join("records.jsonl"), &records)?;
    write_traces_csv(&out_dir.join("traces.csv"), &records)?;
    write_runtime_csv(&out_dir.join("runtime_vs_qubits.csv"), &records)?;
    write_runtime_summary_csv(&out_dir.join("runtime_summary.csv"), &records)?;
    write_infidelity_csv(&out_dir.join("infidelity_vs_cos2beta.csv"), &records)?;
    Ok(records)
}
