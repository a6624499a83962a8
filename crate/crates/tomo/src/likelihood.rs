//! Cost functions — multinomial negative log-likelihood and its
//! Poisson-approximated Gaussian form — plus the analytic gradient in rank-1
//! form and a measured curvature bound used for default step sizes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::counters;
use crate::error::{Error, Result};
use crate::types::{ClickVector, DensityMatrix, MeasurementEnsemble};

/// Per-outcome residuals ν_i = (r·p_i − n_i)/√max(n_i, 1), the ratio of the
/// error to the expected error. The max(·,1) floor keeps zero-count outcomes
/// finite.
#[derive(Debug, Clone)]
pub struct Residuals {
    nu: DVector<f64>,
}

impl Residuals {
    pub fn compute(
        state: &DensityMatrix,
        ensemble: &MeasurementEnsemble,
        clicks: &ClickVector,
    ) -> Result<Self> {
        let (p, n, r) = checked_inputs(state, ensemble, clicks)?;
        let r = r.ok_or(Error::MissingScale)?;
        let nu = DVector::from_iterator(
            n.len(),
            p.iter().zip(n).map(|(&pi, &ni)| (r * pi - ni) / ni.max(1.0).sqrt()),
        );
        Ok(Self { nu })
    }

    pub fn values(&self) -> &[f64] {
        self.nu.as_slice()
    }

    /// νᵀν, the Gaussian cost.
    pub fn sum_of_squares(&self) -> f64 {
        self.nu.iter().map(|v| v * v).sum()
    }
}

/// A cost evaluation: total C, per-outcome C/N, and optionally the gradient.
#[derive(Debug, Clone)]
pub struct CostReport {
    pub cost: f64,
    pub per_outcome: f64,
    pub gradient: Option<DMatrix<Complex64>>,
}

impl CostReport {
    fn new(cost: f64, n_outcomes: usize, gradient: Option<DMatrix<Complex64>>) -> Self {
        Self { cost, per_outcome: cost / n_outcomes as f64, gradient }
    }
}

fn checked_inputs<'c>(
    state: &DensityMatrix,
    ensemble: &MeasurementEnsemble,
    clicks: &'c ClickVector,
) -> Result<(DVector<f64>, &'c [f64], Option<f64>)> {
    if clicks.len() != ensemble.len() {
        return Err(Error::Dimension { expected: ensemble.len(), got: clicks.len() });
    }
    if state.dim() != ensemble.dim() {
        return Err(Error::Dimension { expected: ensemble.dim(), got: state.dim() });
    }
    let p = crate::types::forward_raw(ensemble.rows(), state.entries());
    Ok((p, clicks.counts(), clicks.scale()))
}

/// C(ρ) = −Σ_i n_i log p_i, dropping the state-independent constant.
/// Returns +∞ (not an error) when some p_i ≤ 0 has n_i > 0.
pub fn cost_multinomial(
    state: &DensityMatrix,
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
) -> Result<CostReport> {
    let (p, n, _) = checked_inputs(state, ensemble, clicks)?;
    Ok(CostReport::new(multinomial_cost_raw(p.as_slice(), n), ensemble.len(), None))
}

pub(crate) fn multinomial_cost_raw(p: &[f64], n: &[f64]) -> f64 {
    let mut cost = 0.0;
    for (&pi, &ni) in p.iter().zip(n) {
        if ni > 0.0 {
            if pi <= 0.0 {
                return f64::INFINITY;
            }
            cost -= ni * pi.ln();
        }
    }
    cost
}

/// C(ρ) = Σ_i (r·p_i − n_i)²/max(n_i, 1) = νᵀν.
pub fn cost_gaussian(
    state: &DensityMatrix,
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
) -> Result<CostReport> {
    let (p, n, r) = checked_inputs(state, ensemble, clicks)?;
    let r = r.ok_or(Error::MissingScale)?;
    Ok(CostReport::new(gaussian_cost_raw(p.as_slice(), n, r), ensemble.len(), None))
}

pub(crate) fn gaussian_cost_raw(p: &[f64], n: &[f64], r: f64) -> f64 {
    p.iter()
        .zip(n)
        .map(|(&pi, &ni)| {
            let resid = r * pi - ni;
            resid * resid / ni.max(1.0)
        })
        .sum()
}

/// Exact gradient of `cost_gaussian`: ∇C = 2·Σ_i w_i |φ_i⟩⟨φ_i| with
/// w_i = r(r·p_i − n_i)/max(n_i, 1), assembled row-wise in O(N d²) and
/// symmetrized.
pub fn gradient_gaussian(
    state: &DensityMatrix,
    ensemble: &MeasurementEnsemble,
    clicks: &ClickVector,
) -> Result<DMatrix<Complex64>> {
    let (p, n, r) = checked_inputs(state, ensemble, clicks)?;
    let r = r.ok_or(Error::MissingScale)?;
    Ok(gaussian_gradient_raw(ensemble.rows(), p.as_slice(), n, r))
}

pub(crate) fn gaussian_gradient_raw(
    rows: &DMatrix<Complex64>,
    p: &[f64],
    n: &[f64],
    r: f64,
) -> DMatrix<Complex64> {
    let weights: Vec<f64> = p
        .iter()
        .zip(n)
        .map(|(&pi, &ni)| 2.0 * r * (r * pi - ni) / ni.max(1.0))
        .collect();
    weighted_frame(rows, &weights)
}

pub(crate) fn multinomial_gradient_raw(
    rows: &DMatrix<Complex64>,
    p: &[f64],
    n: &[f64],
) -> DMatrix<Complex64> {
    let weights: Vec<f64> = p
        .iter()
        .zip(n)
        .map(|(&pi, &ni)| if ni > 0.0 { -ni / pi } else { 0.0 })
        .collect();
    weighted_frame(rows, &weights)
}

/// Σ_i w_i |φ_i⟩⟨φ_i| = A†·diag(w)·A, symmetrized against rounding drift.
fn weighted_frame(rows: &DMatrix<Complex64>, weights: &[f64]) -> DMatrix<Complex64> {
    counters::count_gradient();
    let mut scaled = rows.clone();
    for (i, &w) in weights.iter().enumerate() {
        for j in 0..rows.ncols() {
            scaled[(i, j)] *= w;
        }
    }
    let g = rows.adjoint() * scaled;
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Measured curvature (Lipschitz) bound of the Gaussian cost:
/// L = 2r²·λ_max(Σ_i vec(Π_i)vec(Π_i)†/max(n_i, 1)), estimated by a fixed
/// number of power iterations on the weighted frame operator and inflated by
/// a 10% safety margin. Deterministic for fixed inputs.
///
/// The reciprocal 1/L is the default gradient step; L itself is the default
/// backtracking scale.
pub fn lipschitz_bound(ensemble: &MeasurementEnsemble, clicks: &ClickVector) -> Result<f64> {
    if clicks.len() != ensemble.len() {
        return Err(Error::Dimension { expected: ensemble.len(), got: clicks.len() });
    }
    let r = clicks.scale().ok_or(Error::MissingScale)?;
    let rows = ensemble.rows();
    let d = ensemble.dim();
    let inv_floor: Vec<f64> = clicks.counts().iter().map(|&ni| 1.0 / ni.max(1.0)).collect();

    // X ↦ 2·Σ_i (⟨φ_i|X|φ_i⟩ / max(n_i,1)) |φ_i⟩⟨φ_i|, without touching the
    // per-iteration counters (this is setup work, not loop work).
    let apply = |x: &DMatrix<Complex64>| -> DMatrix<Complex64> {
        let m = rows * x;
        let mut scaled = rows.clone();
        for i in 0..rows.nrows() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..d {
                acc += m[(i, j)] * rows[(i, j)].conj();
            }
            let w = 2.0 * acc.re * inv_floor[i];
            for j in 0..d {
                scaled[(i, j)] *= w;
            }
        }
        let g = rows.adjoint() * scaled;
        (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
    };

    let start = DMatrix::from_diagonal_element(d, d, Complex64::new(1.0 / d as f64, 0.0));
    let mut x = apply(&start);
    let norm = x.norm();
    if !(norm.is_finite() && norm > 0.0) {
        return Ok(2.0 * r * r);
    }
    x /= Complex64::new(norm, 0.0);
    let mut lambda = 0.0;
    for _ in 0..40 {
        let y = apply(&x);
        lambda = x.dotc(&y).re;
        let norm = y.norm();
        if !(norm.is_finite() && norm > 0.0) {
            break;
        }
        x = y / Complex64::new(norm, 0.0);
    }
    Ok(1.1 * r * r * lambda)
}
