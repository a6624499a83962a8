//! Shared data model: density matrices, rank-1 measurement ensembles, click
//! records, and outcome probabilities.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::counters;
use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const EIGENVALUE_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;

/// d×d complex Hermitian matrix describing a quantum state estimate.
///
/// Hermiticity is unconditional; positivity and unit trace are tracked by the
/// `physical` flag so that solver intermediates may leave the feasible set.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: DMatrix<Complex64>,
    physical: bool,
}

impl DensityMatrix {
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "density matrix must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        let d = entries.nrows();
        for i in 0..d {
            for j in i..d {
                let delta = entries[(i, j)] - entries[(j, i)].conj();
                if delta.norm() > HERMITICITY_TOL {
                    return Err(Error::InvalidInput(format!(
                        "matrix is not Hermitian at ({i},{j}): asymmetry {:.3e}",
                        delta.norm()
                    )));
                }
            }
        }
        Ok(Self { dim: d, entries, physical: false })
    }

    /// I/d, the maximally mixed state.
    pub fn maximally_mixed(dim: usize) -> Self {
        let entries = DMatrix::from_diagonal_element(
            dim,
            dim,
            Complex64::new(1.0 / dim as f64, 0.0),
        );
        Self { dim, entries, physical: true }
    }

    /// |ψ⟩⟨ψ| for the given ket (normalized internally).
    pub fn from_pure(ket: &[Complex64]) -> Result<Self> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidInput("pure-state ket must be nonzero and finite".into()));
        }
        let d = ket.len();
        let v = DVector::from_iterator(d, ket.iter().map(|z| z / norm));
        let entries = &v * v.adjoint();
        Ok(Self { dim: d, entries, physical: true })
    }

    /// Wraps a matrix that is physical by construction (projection output,
    /// normalized positive update, generated state). Symmetrizes away
    /// floating-point drift.
    pub(crate) fn from_physical_parts(entries: DMatrix<Complex64>) -> Self {
        let dim = entries.nrows();
        let herm = (&entries + entries.adjoint()) * Complex64::new(0.5, 0.0);
        Self { dim, entries: herm, physical: true }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entries[(i, i)].re).sum()
    }

    /// Whether this matrix was produced by a construction that guarantees
    /// positivity and unit trace.
    pub fn flagged_physical(&self) -> bool {
        self.physical
    }

    /// Checks all eigenvalues ≥ −1e-10 and trace within 1e-10 of 1.
    pub fn verify_physical(&self) -> Result<()> {
        let trace = self.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidInput(format!(
                "trace {trace} is not 1 within {TRACE_TOL:e}"
            )));
        }
        let eigs = self.entries.clone().symmetric_eigen().eigenvalues;
        let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -EIGENVALUE_TOL {
            return Err(Error::InvalidInput(format!(
                "negative eigenvalue {min:.3e} below -{EIGENVALUE_TOL:e}"
            )));
        }
        Ok(())
    }

    /// Verifies positivity/trace numerically and returns the same matrix with
    /// the `physical` flag set.
    pub fn into_physical_checked(mut self) -> Result<Self> {
        self.verify_physical()?;
        self.physical = true;
        Ok(self)
    }
}

/// N rank-1 projector rows: row i holds the bra ⟨φ_i|, so the Born rule reads
/// p_i = ⟨φ_i|ρ|φ_i⟩ without ever materializing d×d projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementEnsemble {
    rows: DMatrix<Complex64>,
    povm_subsets: Vec<Vec<usize>>,
    informationally_complete: bool,
}

pub const ROW_NORM_TOL: f64 = 1e-12;

impl MeasurementEnsemble {
    pub fn new(
        rows: DMatrix<Complex64>,
        povm_subsets: Vec<Vec<usize>>,
        informationally_complete: bool,
    ) -> Result<Self> {
        let (n, d) = (rows.nrows(), rows.ncols());
        if n == 0 || d == 0 {
            return Err(Error::InvalidInput("ensemble must have at least one row".into()));
        }
        for i in 0..n {
            let norm = rows.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > ROW_NORM_TOL {
                return Err(Error::InvalidInput(format!(
                    "row {i} has norm {norm}, expected 1 within {ROW_NORM_TOL:e}"
                )));
            }
        }
        if informationally_complete && n < d * d {
            return Err(Error::InvalidInput(format!(
                "informationally complete ensembles need at least d²={} rows, got {n}",
                d * d
            )));
        }
        for (k, subset) in povm_subsets.iter().enumerate() {
            if subset.is_empty() {
                return Err(Error::InvalidSubset(format!("subset {k} is empty")));
            }
            if let Some(&bad) = subset.iter().find(|&&i| i >= n) {
                return Err(Error::InvalidSubset(format!(
                    "subset {k} references row {bad}, but N = {n}"
                )));
            }
        }
        Ok(Self { rows, povm_subsets, informationally_complete })
    }

    pub fn len(&self) -> usize {
        self.rows.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.rows.ncols()
    }

    /// The N×d matrix of bras.
    pub fn rows(&self) -> &DMatrix<Complex64> {
        &self.rows
    }

    pub fn povm_subsets(&self) -> &[Vec<usize>] {
        &self.povm_subsets
    }

    pub fn subset(&self, subset_id: usize) -> Result<&[usize]> {
        self.povm_subsets
            .get(subset_id)
            .map(Vec::as_slice)
            .ok_or_else(|| {
                Error::InvalidSubset(format!(
                    "subset id {subset_id} out of range (have {})",
                    self.povm_subsets.len()
                ))
            })
    }

    pub fn informationally_complete(&self) -> bool {
        self.informationally_complete
    }
}

/// Observed (or expected) click counts n_i, with the optional scale factor r.
///
/// Counts are stored as f64 so that exact expected counts n = r·p — which are
/// not integers in general — fit the same pipeline as Poisson draws.
#[derive(Debug, Clone, PartialEq)]
pub struct ClickVector {
    counts: DVector<f64>,
    scale: Option<f64>,
}

impl ClickVector {
    pub fn new(counts: Vec<f64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidInput("click vector must be non-empty".into()));
        }
        if counts.iter().any(|&c| !c.is_finite() || c < 0.0) {
            return Err(Error::InvalidInput("click counts must be finite and ≥ 0".into()));
        }
        Ok(Self { counts: DVector::from_vec(counts), scale: None })
    }

    pub fn with_scale(counts: Vec<f64>, scale: f64) -> Result<Self> {
        let mut clicks = Self::new(counts)?;
        clicks.set_scale(scale)?;
        Ok(clicks)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[f64] {
        self.counts.as_slice()
    }

    pub fn scale(&self) -> Option<f64> {
        self.scale
    }

    pub fn set_scale(&mut self, scale: f64) -> Result<()> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidInput(format!("scale must be positive, got {scale}")));
        }
        self.scale = Some(scale);
        Ok(())
    }

    /// The same counts with the scale removed — the trace-preserving workflow,
    /// where r is fitted rather than fixed.
    pub fn discard_scale(&self) -> Self {
        Self { counts: self.counts.clone(), scale: None }
    }

    pub fn total(&self) -> f64 {
        self.counts.sum()
    }
}

/// Born-rule outcome probabilities for one state under one ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    values: DVector<f64>,
}

impl ProbabilityVector {
    pub fn values(&self) -> &[f64] {
        self.values.as_slice()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// p_i = Re ⟨φ_i|ρ|φ_i⟩ for every row, in one O(N d²) pass.
pub fn forward_probabilities(
    state: &DensityMatrix,
    ensemble: &MeasurementEnsemble,
) -> Result<ProbabilityVector> {
    if state.dim() != ensemble.dim() {
        return Err(Error::Dimension { expected: ensemble.dim(), got: state.dim() });
    }
    let values = forward_raw(ensemble.rows(), state.entries());
    Ok(ProbabilityVector { values })
}

/// Shared kernel: rows of (A·ρ) dotted against conj(A) row-wise.
pub(crate) fn forward_raw(rows: &DMatrix<Complex64>, rho: &DMatrix<Complex64>) -> DVector<f64> {
    counters::count_forward();
    let m = rows * rho;
    let n = rows.nrows();
    let mut p = DVector::zeros(n);
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..rows.ncols() {
            acc += m[(i, j)] * rows[(i, j)].conj();
        }
        // ⟨φ|ρ|φ⟩ is real for Hermitian ρ; any imaginary residue is drift.
        debug_assert!(acc.im.abs() < 1e-9, "imaginary residue {:.3e}", acc.im);
        p[i] = acc.re;
    }
    p
}

/// Best estimate of the scale factor from one POVM subset Z:
/// r = (d / N_Z) · Σ_{j∈Z} n_j. Stores the estimate in the ClickVector.
pub fn estimate_scale(
    clicks: &mut ClickVector,
    ensemble: &MeasurementEnsemble,
    subset_id: usize,
) -> Result<f64> {
    if clicks.len() != ensemble.len() {
        return Err(Error::Dimension { expected: ensemble.len(), got: clicks.len() });
    }
    let subset = ensemble.subset(subset_id)?;
    let total: f64 = subset.iter().map(|&j| clicks.counts()[j]).sum();
    if total <= 0.0 {
        return Err(Error::DegenerateData(format!(
            "subset {subset_id} has zero total counts"
        )));
    }
    let r = ensemble.dim() as f64 / subset.len() as f64 * total;
    clicks.set_scale(r)?;
    Ok(r)
}
