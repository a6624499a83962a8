//! Euclidean projection of Hermitian matrices onto the physical set
//! (PSD, fixed trace) via eigendecomposition plus simplex projection of the
//! spectrum.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::counters;
use crate::error::{Error, Result};
use crate::types::DensityMatrix;

/// Eigendecomposition with eigenvalues sorted descending and matching
/// eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    /// Decomposes the Hermitian part (m + m†)/2 of the input.
    pub fn decompose(m: &DMatrix<Complex64>) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite entry in eigendecomposition input".into()));
        }
        let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eigen = herm.symmetric_eigen();
        if eigen.eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("eigensolver produced non-finite eigenvalues".into()));
        }
        let d = eigen.eigenvalues.len();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]));
        let eigenvalues = DVector::from_iterator(d, order.iter().map(|&i| eigen.eigenvalues[i]));
        let mut eigenvectors = DMatrix::zeros(d, d);
        for (col, &i) in order.iter().enumerate() {
            eigenvectors.set_column(col, &eigen.eigenvectors.column(i));
        }
        Ok(Self { eigenvalues, eigenvectors })
    }

    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let scaled = DMatrix::from_fn(self.eigenvectors.nrows(), self.eigenvalues.len(), |i, j| {
            self.eigenvectors[(i, j)] * self.eigenvalues[j]
        });
        scaled * self.eigenvectors.adjoint()
    }

    /// Applies f to each eigenvalue and rebuilds V·diag(f(λ))·V†.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
        let mapped = Self {
            eigenvalues: self.eigenvalues.map(f),
            eigenvectors: self.eigenvectors.clone(),
        };
        mapped.reconstruct()
    }
}

/// Euclidean projection of v onto the simplex {x : x_i ≥ 0, Σ x_i = total}.
///
/// Sort-and-threshold rule: find the largest k with
/// v_(k) − (Σ_{j≤k} v_(j) − total)/k > 0, subtract that threshold, clip.
pub fn simplex_project_scaled(v: &[f64], total: f64) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (idx, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let k = (idx + 1) as f64;
        let candidate = (cumsum - total) / k;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Projection onto the probability simplex (total = 1).
pub fn simplex_project(v: &[f64]) -> Vec<f64> {
    simplex_project_scaled(v, 1.0)
}

/// Closest unit-trace PSD matrix in Frobenius distance: eigendecompose and
/// simplex-project the spectrum. Output is flagged physical.
pub fn project_to_states(m: &DensityMatrix) -> Result<DensityMatrix> {
    let projected = project_matrix(m.entries())?;
    Ok(DensityMatrix::from_physical_parts(projected))
}

/// Raw-matrix path used inside solver loops.
pub(crate) fn project_matrix(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    counters::count_projection();
    let spectral = SpectralDecomposition::decompose(m)?;
    let lambda = simplex_project(spectral.eigenvalues.as_slice());
    let projected = SpectralDecomposition {
        eigenvalues: DVector::from_vec(lambda),
        eigenvectors: spectral.eigenvectors,
    };
    Ok(projected.reconstruct())
}

/// Closest PSD matrix that keeps the input's trace t (simplex scaled to t);
/// used when r is fitted rather than fixed. The result is flagged physical
/// only when t is 1 within tolerance.
pub fn project_trace_preserving(m: &DensityMatrix) -> Result<DensityMatrix> {
    let t = m.trace();
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::DegenerateInput(format!(
            "trace-preserving projection needs positive trace, got {t}"
        )));
    }
    counters::count_projection();
    let spectral = SpectralDecomposition::decompose(m.entries())?;
    let lambda = simplex_project_scaled(spectral.eigenvalues.as_slice(), t);
    let projected = SpectralDecomposition {
        eigenvalues: DVector::from_vec(lambda),
        eigenvectors: spectral.eigenvectors,
    };
    let rebuilt = projected.reconstruct();
    if (t - 1.0).abs() <= crate::types::TRACE_TOL {
        Ok(DensityMatrix::from_physical_parts(rebuilt))
    } else {
        DensityMatrix::from_matrix((&rebuilt + rebuilt.adjoint()) * Complex64::new(0.5, 0.0))
    }
}
