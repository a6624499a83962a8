//! Reproducible synthetic experiments: fixed-purity random states,
//! Pauli-product and β-parameterized product ensembles, Poisson click
//! sampling, and the design-matrix condition number.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{forward_probabilities, ClickVector, DensityMatrix, MeasurementEnsemble};

/// Upper bound on ensemble storage; larger requests fail with a byte estimate
/// instead of exhausting memory.
pub const ENSEMBLE_BYTE_BUDGET: u128 = 2 << 30;

/// RNG substreams derived from one experiment seed (ChaCha8 streams):
/// stream 0 draws the state, stream 1 draws the clicks. Documented so that
/// fixtures can be reproduced cross-language.
pub const STATE_STREAM: u64 = 0;
pub const CLICK_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisFamily {
    /// Tensor products of the six Pauli eigenstates (three mutually unbiased
    /// bases per qubit).
    PauliMub,
    /// β-parameterized bases; β = π/2 reproduces the Pauli MUBs and β → 0
    /// collapses toward a single basis.
    BetaFamily { beta: f64 },
}

/// One synthetic experiment: n qubits, a basis family, the expected events
/// per outcome r/d, the state purity, and the RNG seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub qubits: u32,
    pub basis_family: BasisFamily,
    pub events_per_outcome: f64,
    pub purity: f64,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn dim(&self) -> usize {
        1usize << self.qubits
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits == 0 || self.qubits > 24 {
            return Err(Error::InvalidInput(format!(
                "qubits must be in 1..=24, got {}",
                self.qubits
            )));
        }
        let d = self.dim() as f64;
        if !self.purity.is_finite() || self.purity < 1.0 / d - 1e-9 || self.purity > 1.0 + 1e-9 {
            return Err(Error::InvalidInput(format!(
                "purity {} out of range [1/d = {}, 1]",
                self.purity,
                1.0 / d
            )));
        }
        if let BasisFamily::BetaFamily { beta } = self.basis_family {
            if !beta.is_finite() || !(0.0..=std::f64::consts::PI).contains(&beta) {
                return Err(Error::InvalidInput(format!("beta {beta} out of range [0, π]")));
            }
        }
        if !(self.events_per_outcome.is_finite() && self.events_per_outcome > 0.0) {
            return Err(Error::InvalidInput(format!(
                "events_per_outcome must be positive, got {}",
                self.events_per_outcome
            )));
        }
        Ok(())
    }

    pub fn build_ensemble(&self) -> Result<MeasurementEnsemble> {
        match self.basis_family {
            BasisFamily::PauliMub => pauli_product_ensemble(self.qubits),
            BasisFamily::BetaFamily { beta } => beta_family_ensemble(self.qubits, beta),
        }
    }
}

/// Runs the whole deterministic pipeline (spec, seed) → (state, ensemble,
/// clicks).
pub fn generate(spec: &ExperimentSpec) -> Result<(DensityMatrix, MeasurementEnsemble, ClickVector)> {
    spec.validate()?;
    let state = random_state_fixed_purity(spec.dim(), spec.purity, spec.seed)?;
    let ensemble = spec.build_ensemble()?;
    let clicks = sample_clicks(&state, &ensemble, spec.events_per_outcome, spec.seed)?;
    Ok((state, ensemble, clicks))
}

fn ginibre_state(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let rho = &g * g.adjoint();
    let trace: f64 = (0..d).map(|i| rho[(i, i)].re).sum();
    rho / Complex64::new(trace, 0.0)
}

fn haar_pure(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let v = DVector::from_fn(d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = v.norm();
    let v = v / Complex64::new(norm, 0.0);
    &v * v.adjoint()
}

fn purity_of(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Draws a random state with Tr(ρ²) within 1e-6 of `purity`: a Ginibre draw
/// blended toward I/d (when the draw is purer than the target) or toward a
/// Haar-random pure state (when it is more mixed), with the blend weight
/// found by bisection.
pub fn random_state_fixed_purity(d: usize, purity: f64, seed: u64) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let min_purity = 1.0 / d as f64;
    if !purity.is_finite() || purity < min_purity - 1e-9 || purity > 1.0 + 1e-9 {
        return Err(Error::InvalidInput(format!(
            "purity {purity} out of range [1/d = {min_purity}, 1]"
        )));
    }
    if purity <= min_purity + 1e-12 {
        return Ok(DensityMatrix::maximally_mixed(d));
    }
    let target = purity.min(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(STATE_STREAM);

    const RETRIES: u32 = 100;
    for _ in 0..RETRIES {
        let rho_g = ginibre_state(d, &mut rng);
        // Blend path from f(0) < 0 to f(1) ≥ 0 where f(t) = purity(t) − target.
        let (from, to) = if purity_of(&rho_g) >= target {
            (DMatrix::from_diagonal_element(d, d, Complex64::new(min_purity, 0.0)), rho_g)
        } else {
            let pure = haar_pure(d, &mut rng);
            (rho_g, pure)
        };
        let blend = |t: f64| &from * Complex64::new(1.0 - t, 0.0) + &to * Complex64::new(t, 0.0);
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut best = hi;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let f = purity_of(&blend(mid)) - target;
            if f.abs() <= 1e-9 {
                best = mid;
                break;
            }
            if f >= 0.0 {
                hi = mid;
                best = mid;
            } else {
                lo = mid;
            }
        }
        let state = blend(best);
        if (purity_of(&state) - target).abs() <= 1e-6 {
            return Ok(DensityMatrix::from_physical_parts(state));
        }
    }
    Err(Error::Generation { purity, retries: RETRIES })
}

fn capacity_check(qubits: u32) -> Result<()> {
    let rows = 6u128.checked_pow(qubits).unwrap_or(u128::MAX);
    let dim = 2u128.checked_pow(qubits).unwrap_or(u128::MAX);
    let required = rows
        .saturating_mul(dim.saturating_mul(16).saturating_add(8))
        .saturating_add(rows.saturating_mul(8));
    if required > ENSEMBLE_BYTE_BUDGET {
        return Err(Error::Capacity {
            qubits,
            required_bytes: required,
            budget_bytes: ENSEMBLE_BYTE_BUDGET,
        });
    }
    Ok(())
}

/// Builds the 6ⁿ tensor-product rows over the given six single-qubit kets,
/// registering each of the 3ⁿ product bases (2ⁿ rows each) as a POVM subset.
fn product_ensemble(qubits: u32, kets: [[Complex64; 2]; 6]) -> Result<MeasurementEnsemble> {
    if qubits == 0 {
        return Err(Error::InvalidInput("need at least one qubit".into()));
    }
    capacity_check(qubits)?;
    let n = qubits as usize;
    let d = 1usize << n;
    let n_bases = 3usize.pow(qubits);
    let mut rows = DMatrix::zeros(n_bases * d, d);
    let mut subsets = Vec::with_capacity(n_bases);
    let mut row_idx = 0;
    for basis_idx in 0..n_bases {
        let start = row_idx;
        for bit_idx in 0..d {
            // Qubit 0 is the most significant base-3/base-2 digit.
            let mut ket = vec![Complex64::new(1.0, 0.0)];
            for q in 0..n {
                let base = basis_idx / 3usize.pow((n - 1 - q) as u32) % 3;
                let bit = bit_idx >> (n - 1 - q) & 1;
                let single = kets[base * 2 + bit];
                let mut next = vec![Complex64::new(0.0, 0.0); ket.len() * 2];
                for (k, &amp) in ket.iter().enumerate() {
                    next[k * 2] = amp * single[0];
                    next[k * 2 + 1] = amp * single[1];
                }
                ket = next;
            }
            for (j, amp) in ket.iter().enumerate() {
                rows[(row_idx, j)] = amp.conj(); // store the bra
            }
            row_idx += 1;
        }
        subsets.push((start..row_idx).collect());
    }
    MeasurementEnsemble::new(rows, subsets, true)
}

/// The 6ⁿ products of the six Pauli eigenstates {|0⟩,|1⟩,|+⟩,|−⟩,|+i⟩,|−i⟩}.
pub fn pauli_product_ensemble(qubits: u32) -> Result<MeasurementEnsemble> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    let kets = [
        [re(1.0), re(0.0)],
        [re(0.0), re(1.0)],
        [re(s), re(s)],
        [re(s), re(-s)],
        [re(s), im(s)],
        [re(s), im(-s)],
    ];
    product_ensemble(qubits, kets)
}

/// β-family bases with c = cos(β/2), s = sin(β/2):
/// {[0,1],[1,0]}, {[c,s],[s,−c]}, {[c,is],[s,−ic]}, tensored over n qubits.
/// β = π/2 reproduces the Pauli MUBs up to phase; β = 0 collapses to the
/// computational basis.
pub fn beta_family_ensemble(qubits: u32, beta: f64) -> Result<MeasurementEnsemble> {
    if !beta.is_finite() || !(0.0..=std::f64::consts::PI).contains(&beta) {
        return Err(Error::InvalidInput(format!("beta {beta} out of range [0, π]")));
    }
    let c = (beta / 2.0).cos();
    let s = (beta / 2.0).sin();
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    let kets = [
        [re(0.0), re(1.0)],
        [re(1.0), re(0.0)],
        [re(c), re(s)],
        [re(s), re(-c)],
        [re(c), im(s)],
        [re(s), im(-c)],
    ];
    product_ensemble(qubits, kets)
}

/// Poisson-samples clicks: r = d·events_per_outcome, n_i ~ Poisson(r·p_i),
/// with r stored alongside the counts.
pub fn sample_clicks(
    state: &DensityMatrix,
    ensemble: &MeasurementEnsemble,
    events_per_outcome: f64,
    seed: u64,
) -> Result<ClickVector> {
    if !(events_per_outcome.is_finite() && events_per_outcome > 0.0) {
        return Err(Error::InvalidInput(format!(
            "events_per_outcome must be positive, got {events_per_outcome}"
        )));
    }
    if !state.flagged_physical() {
        state.verify_physical()?;
    }
    let p = forward_probabilities(state, ensemble)?;
    let r = ensemble.dim() as f64 * events_per_outcome;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(CLICK_STREAM);
    let mut counts = Vec::with_capacity(p.len());
    for &pi in p.values() {
        let lambda = (r * pi).max(0.0); // clip −1e-12 probability dust
        if lambda > 0.0 {
            let poisson = Poisson::new(lambda)
                .map_err(|e| Error::Numerical(format!("poisson mean {lambda}: {e}")))?;
            counts.push(poisson.sample(&mut rng));
        } else {
            counts.push(0.0);
        }
    }
    ClickVector::with_scale(counts, r)
}

/// σ_max/σ_min of an N×d² design matrix with rows vec(|φ_i⟩⟨φ_i|) built from
/// the given kets (one ket per row, no normalization assumed). Returns +∞
/// when σ_min < 1e-14·σ_max.
pub fn design_condition_number(kets: &DMatrix<Complex64>) -> f64 {
    let (n, d) = (kets.nrows(), kets.ncols());
    let mut design = DMatrix::zeros(n, d * d);
    for i in 0..n {
        for j in 0..d {
            for k in 0..d {
                design[(i, j * d + k)] = kets[(i, j)] * kets[(i, k)].conj();
            }
        }
    }
    let singular = design.svd(false, false).singular_values;
    let max = singular.iter().cloned().fold(0.0_f64, f64::max);
    let min = singular.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < 1e-14 * max {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Condition number of the ensemble's full-rank design matrix.
pub fn condition_number(ensemble: &MeasurementEnsemble) -> f64 {
    let kets = ensemble.rows().map(|z| z.conj());
    design_condition_number(&kets)
}
