//! Shared helpers for the integration tests: independent oracles (a Jacobi
//! eigensolver, a KKT-enumeration simplex QP solver, finite differences,
//! compensated summation) and small random fixtures. The oracles deliberately
//! avoid the library's own numerics so agreement between the two is evidence,
//! not circularity.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use tomo::{forward_probabilities, ClickVector, DensityMatrix, MeasurementEnsemble};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(d, d, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    (&g + g.adjoint()) * c(0.5, 0.0)
}

/// Ginibre construction G·G†/Tr — physical by construction, independent of
/// the library's generators and projections.
pub fn random_physical(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(d, d, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr: f64 = (0..d).map(|i| m[(i, i)].re).sum();
    m * c(1.0 / tr, 0.0)
}

pub fn frobenius(a: &DMatrix<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Canonical basis of Hermitian d×d matrices: d diagonal units, then the
/// symmetric and antisymmetric off-diagonal pairs (d² directions total).
pub fn hermitian_basis(d: usize) -> Vec<DMatrix<Complex64>> {
    let mut basis = Vec::with_capacity(d * d);
    for k in 0..d {
        let mut m = DMatrix::zeros(d, d);
        m[(k, k)] = c(1.0, 0.0);
        basis.push(m);
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = DMatrix::zeros(d, d);
            m[(j, k)] = c(inv_sqrt2, 0.0);
            m[(k, j)] = c(inv_sqrt2, 0.0);
            basis.push(m);
            let mut m = DMatrix::zeros(d, d);
            m[(j, k)] = c(0.0, inv_sqrt2);
            m[(k, j)] = c(0.0, -inv_sqrt2);
            basis.push(m);
        }
    }
    basis
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices. Returns
/// (eigenvalues descending, eigenvector columns) and asserts its own
/// reconstruction residual, so a bad rotation can't silently corrupt a test.
pub fn jacobi_hermitian(a: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let d = a.nrows();
    assert_eq!(d, a.ncols());
    let mut m = (a + a.adjoint()) * c(0.5, 0.0);
    let mut v = DMatrix::<Complex64>::identity(d, d);
    for _ in 0..60 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off < 1e-14 {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let u = apq / mag;
                let tau = (m[(q, q)].re - m[(p, p)].re) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let mut j = DMatrix::<Complex64>::identity(d, d);
                j[(p, p)] = c(cs, 0.0);
                j[(q, q)] = c(cs, 0.0);
                j[(p, q)] = u * sn;
                j[(q, p)] = -u.conj() * sn;
                m = j.adjoint() * m * &j;
                v *= j;
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..d).map(|i| (m[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let eigenvalues: Vec<f64> = pairs.iter().map(|&(l, _)| l).collect();
    let mut vectors = DMatrix::zeros(d, d);
    for (col, &(_, i)) in pairs.iter().enumerate() {
        vectors.set_column(col, &v.column(i));
    }
    let rec = DMatrix::from_fn(d, d, |i, k| {
        (0..d).map(|j| vectors[(i, j)] * eigenvalues[j] * vectors[(k, j)].conj()).sum()
    });
    let scale = 1.0 + frobenius(a);
    assert!(
        frobenius(&(&rec - (a + a.adjoint()) * c(0.5, 0.0))) < 1e-9 * scale,
        "jacobi oracle failed its own reconstruction check"
    );
    (eigenvalues, vectors)
}

/// Singular values (descending) of an arbitrary complex matrix through the
/// Jacobi oracle on the Gram matrix — independent of any library SVD.
pub fn singular_values_oracle(a: &DMatrix<Complex64>) -> Vec<f64> {
    let gram = a.adjoint() * a;
    let (lam, _) = jacobi_hermitian(&gram);
    lam.into_iter().map(|l| l.max(0.0).sqrt()).collect()
}

/// Euclidean projection of v onto {x ≥ 0, Σx = total} by KKT support
/// enumeration: for the (unique) optimum there is a support S with
/// x_i = v_i − θ on S, θ = (Σ_S v − total)/|S|, x_i > 0 on S and v_j ≤ θ off
/// S. Tries every support size on the sorted vector — exhaustive, O(d²).
pub fn simplex_qp_oracle(v: &[f64], total: f64) -> Vec<f64> {
    let d = v.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
    for k in (1..=d).rev() {
        let support_sum: f64 = order[..k].iter().map(|&i| v[i]).sum();
        let theta = (support_sum - total) / k as f64;
        let feasible_on = v[order[k - 1]] - theta > 0.0;
        let feasible_off = k == d || v[order[k]] - theta <= 0.0;
        if feasible_on && feasible_off {
            let mut x = vec![0.0; d];
            for &i in &order[..k] {
                x[i] = v[i] - theta;
            }
            return x;
        }
    }
    // Fallback: everything clipped except the single largest entry.
    let mut x = vec![0.0; d];
    x[order[0]] = total;
    x
}

/// Central finite difference of f along the Hermitian direction h.
pub fn directional_fd(
    f: &mut impl FnMut(&DMatrix<Complex64>) -> f64,
    at: &DMatrix<Complex64>,
    h: &DMatrix<Complex64>,
    eps: f64,
) -> f64 {
    let plus = at + h * c(eps, 0.0);
    let minus = at - h * c(eps, 0.0);
    (f(&plus) - f(&minus)) / (2.0 * eps)
}

/// Re Tr(G·H) — the inner product pairing a gradient with a Hermitian
/// direction.
pub fn gradient_pairing(g: &DMatrix<Complex64>, h: &DMatrix<Complex64>) -> f64 {
    let d = g.nrows();
    let mut acc = Complex64::default();
    for i in 0..d {
        for j in 0..d {
            acc += g[(i, j)] * h[(j, i)];
        }
    }
    acc.re
}

/// Kahan-compensated summation: the extended-precision reference for cost
/// accumulations.
pub fn kahan_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    sum
}

/// Explicit d×d projector |φ⟩⟨φ| from a bra row, for full-matrix Born-rule
/// oracles.
pub fn projector_from_bra(bra: &[Complex64]) -> DMatrix<Complex64> {
    let d = bra.len();
    // row stores ⟨φ|; the ket is its conjugate.
    DMatrix::from_fn(d, d, |i, j| bra[i].conj() * bra[j])
}

/// Exact expected counts n_i = r·p_i with r = d·events_per_outcome — the
/// noiseless limit of the click sampler.
pub fn noiseless_clicks(
    state: &DensityMatrix,
    ensemble: &MeasurementEnsemble,
    events_per_outcome: f64,
) -> ClickVector {
    let p = forward_probabilities(state, ensemble).unwrap();
    let r = ensemble.dim() as f64 * events_per_outcome;
    let counts: Vec<f64> = p.values().iter().map(|&pi| (r * pi).max(0.0)).collect();
    ClickVector::with_scale(counts, r).unwrap()
}

/// Single-qubit computational (Z) basis as a two-row ensemble.
pub fn z_ensemble() -> MeasurementEnsemble {
    let rows = DMatrix::from_row_slice(
        2,
        2,
        &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
    );
    MeasurementEnsemble::new(rows, vec![vec![0, 1]], false).unwrap()
}

pub fn trace_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let d = a.nrows();
    let mut acc = Complex64::default();
    for i in 0..d {
        for j in 0..d {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}
