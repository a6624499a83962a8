//! Monotone projected gradient with Armijo backtracking. The search direction
//! is the feasible chord D = S[ρ − μ⁻¹∇C] − ρ; the step α is halved until the
//! sufficient-decrease test C(ρ + αD) ≤ C(ρ) + ℓ·α·⟨D, ∇C⟩ passes.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::likelihood::{gaussian_cost_raw, gaussian_gradient_raw, lipschitz_bound};
use crate::projection::project_matrix;
use crate::types::{forward_raw, ClickVector, DensityMatrix, MeasurementEnsemble};

use super::{window_converged, HistoryPoint, SolverConfig, SolverReport, Termination};

/// Below this step the chord has collapsed: the iterate is numerically
/// stationary and the run counts as converged.
const ALPHA_FLOOR: f64 = 1e-12;

pub(super) fn run(
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
    r: f64,
    config: &SolverConfig,
) -> Result<SolverReport> {
    let d = ensemble.dim();
    let rows = ensemble.rows();
    let n = clicks.counts();
    let outcomes = ensemble.len() as f64;
    let mu = match config.backtrack_scale {
        Some(m) => m,
        None => lipschitz_bound(ensemble, clicks)?,
    };
    let start = Instant::now();

    let scale = |m: &DMatrix<Complex64>, s: f64| m * Complex64::new(s, 0.0);

    let mut rho = project_matrix(&scale(&DMatrix::identity(d, d), 1.0 / d as f64))?;
    let mut p = forward_raw(rows, &rho);
    let mut c = gaussian_cost_raw(p.as_slice(), n, r);

    let mut costs: Vec<f64> = Vec::new();
    let mut history: Vec<HistoryPoint> = Vec::new();
    let termination;

    'outer: loop {
        let cp = c / outcomes;
        costs.push(cp);
        history.push(HistoryPoint {
            iteration: history.len(),
            cost_per_outcome: cp,
            seconds: start.elapsed().as_secs_f64(),
        });
        if !cp.is_finite() {
            termination = Termination::NumericalFailure;
            break;
        }
        if window_converged(&costs, config.stop_window, config.stop_threshold) {
            termination = Termination::Converged;
            break;
        }
        if costs.len() > config.max_iterations {
            termination = Termination::MaxIterations;
            break;
        }

        let g = gaussian_gradient_raw(rows, p.as_slice(), n, r);
        let target = &rho - scale(&g, 1.0 / mu);
        let cand = match project_matrix(&target) {
            Ok(m) => m,
            Err(_) => {
                termination = Termination::NumericalFailure;
                break;
            }
        };
        let dmat = &cand - &rho;
        // ⟨D, ∇C⟩ = Re tr(D·∇C); both are Hermitian, so the trace inner
        // product reduces to an entrywise conjugated dot.
        let slope = dmat.dotc(&g).re;

        let mut alpha = 1.0f64;
        let (pt, ct) = loop {
            let trial = &rho + scale(&dmat, alpha);
            let pt = forward_raw(rows, &trial);
            let ct = gaussian_cost_raw(pt.as_slice(), n, r);
            if ct <= c + config.backtrack_slope * alpha * slope {
                break (pt, ct);
            }
            alpha *= config.backtrack_shrink;
            if alpha < ALPHA_FLOOR {
                termination = Termination::Converged;
                break 'outer;
            }
        };
        rho = &rho + scale(&dmat, alpha);
        p = pt;
        c = ct;
    }

    Ok(SolverReport {
        final_state: DensityMatrix::from_physical_parts(rho),
        history,
        termination,
    })
}
