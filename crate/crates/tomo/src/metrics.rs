//! State-comparison metrics: fidelity, infidelity, purity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::projection::SpectralDecomposition;
use crate::types::DensityMatrix;

/// Eigenvalue dust at least this negative is clipped to zero before square
/// roots; anything worse is a genuine positivity violation.
const CLIP_FLOOR: f64 = -1e-10;

fn ensure_physical(m: &DensityMatrix, which: &str) -> Result<()> {
    if m.flagged_physical() {
        return Ok(());
    }
    m.verify_physical()
        .map_err(|e| Error::InvalidInput(format!("{which} state is not physical: {e}")))
}

fn clipped_sqrt(lambda: f64) -> f64 {
    debug_assert!(lambda >= CLIP_FLOOR, "eigenvalue {lambda:.3e} below clip floor");
    lambda.max(0.0).sqrt()
}

/// Fidelity Tr√(√a·b·√a) ∈ [0, 1], via two Hermitian eigendecompositions.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension { expected: a.dim(), got: b.dim() });
    }
    ensure_physical(a, "first")?;
    ensure_physical(b, "second")?;
    let spec_a = SpectralDecomposition::decompose(a.entries())?;
    let sqrt_a = spec_a.map_eigenvalues(clipped_sqrt);
    let inner = &sqrt_a * b.entries() * &sqrt_a;
    let herm = (&inner + inner.adjoint()) * Complex64::new(0.5, 0.0);
    let spec_inner = SpectralDecomposition::decompose(&herm)?;
    let sum: f64 = spec_inner.eigenvalues.iter().map(|&l| clipped_sqrt(l)).sum();
    // Rounding may overshoot the unit interval by ~1e-9; clamp it away.
    debug_assert!(sum < 1.0 + 1e-9, "fidelity overshoot {sum}");
    Ok(sum.clamp(0.0, 1.0))
}

/// 1 − fidelity(a, b).
pub fn infidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    Ok(1.0 - fidelity(a, b)?)
}

/// Tr(ρ²), which for Hermitian ρ is the squared Frobenius norm.
pub fn purity(a: &DensityMatrix) -> Result<f64> {
    ensure_physical(a, "input")?;
    Ok(a.entries().iter().map(|z| z.norm_sqr()).sum())
}
