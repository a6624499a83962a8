//! Diluted iterative algorithm. Multiplicative updates
//! ρ ← (I+εR)ρ(I+εR)/Tr[·] with R = −H^{−1/2}·∇C_mult·H^{−1/2} and
//! H = Σ_i Π_i / Σ_i p_i, so every iterate stays positive by construction.
//! The dilution ε is chosen each iteration by golden-section search on (0, 1]
//! minimizing the multinomial cost of the trial update.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::likelihood::{gaussian_cost_raw, multinomial_cost_raw, multinomial_gradient_raw};
use crate::projection::SpectralDecomposition;
use crate::types::{forward_raw, ClickVector, DensityMatrix, MeasurementEnsemble};

use super::{
    common_prechecks, window_converged, HistoryPoint, SolverConfig, SolverReport, Termination,
};

/// Eigenvalues of ΣΠ below this fraction of the largest make H^{−1/2}
/// numerically meaningless.
const SPECTRUM_FLOOR: f64 = 1e-12;

const SEARCH_EVALS: usize = 20;
const FALLBACK_EPSILON: f64 = 0.01;

/// Same run as [`super::solve_dia`], additionally calling `observer` with
/// every iterate (index, state) before it is scored — including the initial
/// maximally mixed state. Useful for checking positivity along the whole
/// trajectory.
pub fn solve_dia_observed(
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
    config: &SolverConfig,
    observer: impl FnMut(usize, &DensityMatrix),
) -> Result<SolverReport> {
    let r = common_prechecks(ensemble, clicks, config)?;
    run(ensemble, clicks, r, config, observer)
}

pub(super) fn run(
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
    r: f64,
    config: &SolverConfig,
    mut observer: impl FnMut(usize, &DensityMatrix),
) -> Result<SolverReport> {
    let d = ensemble.dim();
    let rows = ensemble.rows();
    let n = clicks.counts();
    let outcomes = ensemble.len() as f64;
    let start = Instant::now();

    let scale = |m: &DMatrix<Complex64>, s: f64| m * Complex64::new(s, 0.0);

    // ΣΠ_i = A†A is fixed; decompose it once. Its inverse square root only
    // needs rescaling by √(Σp) each iteration.
    let pi_sum = rows.adjoint() * rows;
    let spectrum = SpectralDecomposition::decompose(&pi_sum)?;
    let lam_max = spectrum.eigenvalues[0];
    let lam_min = spectrum.eigenvalues[spectrum.eigenvalues.len() - 1];
    if !(lam_max > 0.0) || lam_min < SPECTRUM_FLOOR * lam_max {
        return Err(Error::IllConditioned(format!(
            "sum of measurement projectors is numerically singular \
             (eigenvalue range [{lam_min:.3e}, {lam_max:.3e}])"
        )));
    }
    let pi_inv_half = spectrum.map_eigenvalues(|l| 1.0 / l.sqrt());
    let identity = DMatrix::<Complex64>::identity(d, d);

    let mut rho = scale(&identity, 1.0 / d as f64);
    let mut costs: Vec<f64> = Vec::new();
    let mut history: Vec<HistoryPoint> = Vec::new();
    let termination;

    loop {
        let state = DensityMatrix::from_physical_parts(rho.clone());
        observer(history.len(), &state);
        let p = forward_raw(rows, &rho);
        let cp = gaussian_cost_raw(p.as_slice(), n, r) / outcomes;
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

        let sp: f64 = p.iter().sum();
        let h_inv_half = scale(&pi_inv_half, sp.sqrt());
        let grad = multinomial_gradient_raw(rows, p.as_slice(), n);
        let raw = &h_inv_half * &grad * &h_inv_half;
        let rmat = scale(&(&raw + raw.adjoint()), -0.5);
        if rmat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            termination = Termination::NumericalFailure;
            break;
        }

        let mut trial_cost = |eps: f64| -> f64 {
            let t = &identity + scale(&rmat, eps);
            let cand = &t * &rho * &t;
            let tr = cand.trace().re;
            if !(tr > 0.0) || !tr.is_finite() {
                return f64::INFINITY;
            }
            let pc = forward_raw(rows, &scale(&cand, 1.0 / tr));
            multinomial_cost_raw(pc.as_slice(), n)
        };
        let (mut eps, best) = golden_section(&mut trial_cost, 0.0, 1.0, SEARCH_EVALS);
        if !best.is_finite() {
            eps = FALLBACK_EPSILON;
            if !trial_cost(eps).is_finite() {
                termination = Termination::NumericalFailure;
                break;
            }
        }

        let t = &identity + scale(&rmat, eps);
        let cand = &t * &rho * &t;
        let tr = cand.trace().re;
        if !(tr > 0.0) || !tr.is_finite() {
            termination = Termination::NumericalFailure;
            break;
        }
        let next = scale(&cand, 1.0 / tr);
        rho = scale(&(&next + next.adjoint()), 0.5);
    }

    Ok(SolverReport {
        final_state: DensityMatrix::from_physical_parts(rho),
        history,
        termination,
    })
}

/// Golden-section minimization on (lo, hi] with a fixed evaluation budget;
/// returns the bracket midpoint and its value. Interior probes never touch
/// `lo` itself, so an open lower endpoint is safe.
fn golden_section(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64, evals: usize) -> (f64, f64) {
    let gr = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut used = 2;
    while used < evals {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
        used += 1;
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    (x, fx)
}
