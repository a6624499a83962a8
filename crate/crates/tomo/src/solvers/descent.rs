//! Shared engine for the three fixed-step descent variants (plain, momentum,
//! accelerated). Each iteration projects the running iterate onto the state
//! set, records the Gaussian cost per outcome, then takes its variant's step.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::likelihood::{gaussian_cost_raw, gaussian_gradient_raw, lipschitz_bound};
use crate::projection::project_matrix;
use crate::types::{forward_raw, ClickVector, DensityMatrix, MeasurementEnsemble};

use super::{window_converged, HistoryPoint, SolverConfig, SolverReport, Termination};

#[derive(Clone, Copy)]
pub(super) enum Kind {
    Plain,
    Momentum,
    Accelerated,
}

pub(super) fn run(
    kind: Kind,
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
    r: f64,
    config: &SolverConfig,
) -> Result<SolverReport> {
    let d = ensemble.dim();
    let rows = ensemble.rows();
    let n = clicks.counts();
    let outcomes = ensemble.len() as f64;
    let step = match config.step_size {
        Some(s) => s,
        None => 1.0 / lipschitz_bound(ensemble, clicks)?,
    };
    let start = Instant::now();

    let scale = |m: &DMatrix<Complex64>, s: f64| m * Complex64::new(s, 0.0);

    let mut rho = scale(&DMatrix::identity(d, d), 1.0 / d as f64);
    // Feasible fallback for the rare case where the iterate leaves the domain
    // of the eigensolver (non-finite entries) before we can project it.
    let mut last_projected = rho.clone();
    let mut momentum = DMatrix::<Complex64>::zeros(d, d);
    let mut zeta = config.inertia;
    let mut prev_magnitude: Option<f64> = None;
    let mut previous = rho.clone();

    let mut costs: Vec<f64> = Vec::new();
    let mut history: Vec<HistoryPoint> = Vec::new();
    let termination;
    let final_matrix;

    loop {
        let projected = match project_matrix(&rho) {
            Ok(m) => m,
            Err(_) => {
                termination = Termination::NumericalFailure;
                final_matrix = last_projected;
                break;
            }
        };
        let p = forward_raw(rows, &projected);
        let cp = gaussian_cost_raw(p.as_slice(), n, r) / outcomes;
        costs.push(cp);
        history.push(HistoryPoint {
            iteration: history.len(),
            cost_per_outcome: cp,
            seconds: start.elapsed().as_secs_f64(),
        });
        if !cp.is_finite() {
            termination = Termination::NumericalFailure;
            final_matrix = projected;
            break;
        }
        if window_converged(&costs, config.stop_window, config.stop_threshold) {
            termination = Termination::Converged;
            final_matrix = projected;
            break;
        }
        if costs.len() > config.max_iterations {
            termination = Termination::MaxIterations;
            final_matrix = projected;
            break;
        }

        let g = gaussian_gradient_raw(rows, p.as_slice(), n, r);
        match kind {
            Kind::Plain => {
                rho = &projected - scale(&g, step);
            }
            Kind::Momentum => {
                // Each time the cost per outcome drops an order of magnitude,
                // pull the inertia closer to 1 to lengthen the memory.
                let magnitude =
                    if cp > 0.0 { cp.log10().ceil() } else { f64::NEG_INFINITY };
                match prev_magnitude {
                    None => prev_magnitude = Some(magnitude),
                    Some(pm) if magnitude < pm => {
                        zeta = 1.0 - (1.0 - zeta) * 0.95;
                        prev_magnitude = Some(magnitude);
                    }
                    _ => {}
                }
                momentum = scale(&momentum, zeta) - scale(&g, step);
                rho = &projected + &momentum;
            }
            Kind::Accelerated => {
                // 1-based iteration counter: the first step's coefficient
                // (1−2)/(1+1) multiplies a zero difference, so it reduces to
                // a plain projected-gradient step.
                let k = costs.len() as f64;
                let coef = (k - 2.0) / (k + 1.0);
                let mut nxt = &projected - scale(&g, step);
                nxt += scale(&(&projected - &previous), coef);
                previous = projected.clone();
                rho = nxt;
            }
        }
        last_projected = projected;
    }

    Ok(SolverReport {
        final_state: DensityMatrix::from_physical_parts(final_matrix),
        history,
        termination,
    })
}
