//! Iterative reconstruction algorithms behind one interface: basic projected
//! gradient descent, PGDM (projected gradient with adaptive momentum), FISTA,
//! PGDB (projected gradient with backtracking), and the diluted iterative
//! algorithm (DIA).

mod descent;
mod dia;
mod pgdb;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{ClickVector, DensityMatrix, MeasurementEnsemble};

pub use dia::solve_dia_observed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Pgd,
    Pgdm,
    Fista,
    Pgdb,
    Dia,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::Pgd, Algorithm::Pgdm, Algorithm::Fista, Algorithm::Pgdb, Algorithm::Dia];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pgd => "pgd",
            Algorithm::Pgdm => "pgdm",
            Algorithm::Fista => "fista",
            Algorithm::Pgdb => "pgdb",
            Algorithm::Dia => "dia",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pgd" => Ok(Algorithm::Pgd),
            "pgdm" => Ok(Algorithm::Pgdm),
            "fista" => Ok(Algorithm::Fista),
            "pgdb" => Ok(Algorithm::Pgdb),
            "dia" => Ok(Algorithm::Dia),
            other => Err(Error::InvalidInput(format!(
                "unknown algorithm '{other}' (expected pgd, pgdm, fista, pgdb, or dia)"
            ))),
        }
    }
}

/// Solver metaparameters. `new` fills per-algorithm defaults; every field can
/// be overridden.
///
/// `step_size: None` and `backtrack_scale: None` resolve at solve time to
/// 1/L̂ and L̂ respectively, where L̂ is the measured curvature bound of the
/// Gaussian cost for the given data ([`crate::likelihood::lipschitz_bound`]).
/// Data-independent constants are poor defaults here: the same nominal step
/// that converges on one data set diverges on another because the cost's
/// curvature scales with r²/n_i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub max_iterations: usize,
    pub stop_window: usize,
    pub stop_threshold: f64,
    pub step_size: Option<f64>,
    pub inertia: f64,
    pub backtrack_shrink: f64,
    pub backtrack_slope: f64,
    pub backtrack_scale: Option<f64>,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        let max_iterations = match algorithm {
            Algorithm::Pgd | Algorithm::Pgdm | Algorithm::Fista => 20_000,
            Algorithm::Pgdb => 5_000,
            Algorithm::Dia => 2_000,
        };
        let stop_threshold = match algorithm {
            Algorithm::Fista | Algorithm::Dia => 1e-6,
            _ => 1e-5,
        };
        Self {
            algorithm,
            max_iterations,
            stop_window: 20,
            stop_threshold,
            step_size: None,
            inertia: 0.95,
            backtrack_shrink: 0.5,
            backtrack_slope: 1e-4,
            backtrack_scale: None,
        }
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn with_stop_threshold(mut self, t: f64) -> Self {
        self.stop_threshold = t;
        self
    }

    pub fn with_step_size(mut self, step: f64) -> Self {
        self.step_size = Some(step);
        self
    }

    pub fn with_backtrack_scale(mut self, mu: f64) -> Self {
        self.backtrack_scale = Some(mu);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.stop_threshold.is_finite() && self.stop_threshold > 0.0) {
            return Err(Error::InvalidInput(format!(
                "stop_threshold must be positive, got {}",
                self.stop_threshold
            )));
        }
        if !(self.inertia > 0.0 && self.inertia < 1.0) {
            return Err(Error::InvalidInput(format!(
                "inertia must lie in (0, 1), got {}",
                self.inertia
            )));
        }
        if !(self.backtrack_shrink > 0.0 && self.backtrack_shrink < 1.0) {
            return Err(Error::InvalidInput(format!(
                "backtrack_shrink must lie in (0, 1), got {}",
                self.backtrack_shrink
            )));
        }
        if let Some(step) = self.step_size {
            if !(step.is_finite() && step > 0.0) {
                return Err(Error::InvalidInput(format!("step_size must be positive, got {step}")));
            }
        }
        if let Some(mu) = self.backtrack_scale {
            if !(mu.is_finite() && mu > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "backtrack_scale must be positive, got {mu}"
                )));
            }
        }
        if self.stop_window == 0 {
            return Err(Error::InvalidInput("stop_window must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryPoint {
    pub iteration: usize,
    pub cost_per_outcome: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Converged,
    MaxIterations,
    NumericalFailure,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Converged => "Converged",
            Termination::MaxIterations => "MaxIterations",
            Termination::NumericalFailure => "NumericalFailure",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolverReport {
    pub final_state: DensityMatrix,
    pub history: Vec<HistoryPoint>,
    pub termination: Termination,
}

impl SolverReport {
    /// Number of recorded iterations (the initial cost counts as one).
    pub fn iterations(&self) -> usize {
        self.history.len()
    }

    pub fn final_cost_per_outcome(&self) -> f64 {
        self.history.last().map_or(f64::NAN, |h| h.cost_per_outcome)
    }

    /// Cumulative wall-clock seconds of the run.
    pub fn seconds(&self) -> f64 {
        self.history.last().map_or(0.0, |h| h.seconds)
    }
}

/// True when the sum of absolute successive cost differences over the last
/// `stop_window` steps falls below `stop_threshold`, or when the history has
/// exhausted `max_iterations`.
pub fn stopping_rule(costs: &[f64], config: &SolverConfig) -> bool {
    costs.len() > config.max_iterations
        || window_converged(costs, config.stop_window, config.stop_threshold)
}

pub(crate) fn window_converged(costs: &[f64], window: usize, threshold: f64) -> bool {
    if costs.len() < window + 1 {
        return false;
    }
    let tail = &costs[costs.len() - (window + 1)..];
    let sum: f64 = tail.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    sum < threshold
}

fn common_prechecks(
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
    config: &SolverConfig,
) -> Result<f64> {
    config.validate()?;
    if clicks.len() != ensemble.len() {
        return Err(Error::Dimension { expected: ensemble.len(), got: clicks.len() });
    }
    if !ensemble.informationally_complete() {
        return Err(Error::InvalidInput(
            "reconstruction needs an informationally complete ensemble".into(),
        ));
    }
    clicks.scale().ok_or(Error::MissingScale)
}

/// Runs the algorithm named by `config.algorithm`.
pub fn solve(
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
    config: &SolverConfig,
) -> Result<SolverReport> {
    match config.algorithm {
        Algorithm::Pgd => solve_pgd_basic(ensemble, clicks, config),
        Algorithm::Pgdm => solve_pgdm(ensemble, clicks, config),
        Algorithm::Fista => solve_fista(ensemble, clicks, config),
        Algorithm::Pgdb => solve_pgdb(ensemble, clicks, config),
        Algorithm::Dia => solve_dia(ensemble, clicks, config),
    }
}

/// ρ_{k+1} = S[ρ_k − δ∇C(ρ_k)] from ρ₀ = I/d.
pub fn solve_pgd_basic(
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
    config: &SolverConfig,
) -> Result<SolverReport> {
    let r = common_prechecks(ensemble, clicks, config)?;
    descent::run(descent::Kind::Plain, ensemble, clicks, r, config)
}

/// Projected gradient descent with a running momentum term whose inertia
/// tightens every time the cost drops an order of magnitude.
pub fn solve_pgdm(
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
    config: &SolverConfig,
) -> Result<SolverReport> {
    let r = common_prechecks(ensemble, clicks, config)?;
    descent::run(descent::Kind::Momentum, ensemble, clicks, r, config)
}

/// Accelerated projected gradient: momentum coefficient (k−2)/(k+1) applied
/// to the difference of the last two iterates.
pub fn solve_fista(
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
    config: &SolverConfig,
) -> Result<SolverReport> {
    let r = common_prechecks(ensemble, clicks, config)?;
    descent::run(descent::Kind::Accelerated, ensemble, clicks, r, config)
}

/// Monotone projected gradient with Armijo backtracking along the feasible
/// chord toward S[ρ − μ⁻¹∇C].
pub fn solve_pgdb(
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
    config: &SolverConfig,
) -> Result<SolverReport> {
    let r = common_prechecks(ensemble, clicks, config)?;
    pgdb::run(ensemble, clicks, r, config)
}

/// Diluted iterative algorithm: multiplicative updates
/// ρ ← (I+εR)ρ(I+εR)/Tr[·] with R = −H^{−1/2}∇C H^{−1/2} and ε optimized
/// each iteration by golden-section search on (0, 1].
pub fn solve_dia(
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
    config: &SolverConfig,
) -> Result<SolverReport> {
    let r = common_prechecks(ensemble, clicks, config)?;
    dia::run(ensemble, clicks, r, config, |_, _| {})
}
