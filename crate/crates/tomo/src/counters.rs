//! Thread-local tallies of the dominant O(N d²) linear-algebra passes.
//!
//! Tests use these to assert the per-iteration cost of each solver
//! structurally instead of timing wall clocks.

use std::cell::Cell;

thread_local! {
    static FORWARD: Cell<u64> = const { Cell::new(0) };
    static GRADIENT: Cell<u64> = const { Cell::new(0) };
    static PROJECTION: Cell<u64> = const { Cell::new(0) };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpCounts {
    /// Probability passes: one N×d by d×d product plus a row-wise reduction.
    pub forward_passes: u64,
    /// Gradient passes: one weighted dᵀ·A accumulation over the N rows.
    pub gradient_passes: u64,
    /// Spectral projections (d×d eigendecomposition plus simplex step).
    pub projections: u64,
}

pub fn reset_op_counts() {
    FORWARD.with(|c| c.set(0));
    GRADIENT.with(|c| c.set(0));
    PROJECTION.with(|c| c.set(0));
}

pub fn op_counts() -> OpCounts {
    OpCounts {
        forward_passes: FORWARD.with(Cell::get),
        gradient_passes: GRADIENT.with(Cell::get),
        projections: PROJECTION.with(Cell::get),
    }
}

pub(crate) fn count_forward() {
    FORWARD.with(|c| c.set(c.get() + 1));
}

pub(crate) fn count_gradient() {
    GRADIENT.with(|c| c.set(c.get() + 1));
}

pub(crate) fn count_projection() {
    PROJECTION.with(|c| c.set(c.get() + 1));
}
