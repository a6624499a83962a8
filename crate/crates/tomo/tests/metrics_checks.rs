mod common;

use common::{c, jacobi_hermitian, random_hermitian, random_physical, rng, simplex_qp_oracle};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use tomo::metrics::{fidelity, infidelity, purity};
use tomo::{DensityMatrix, Error};

fn diag_state(values: &[f64]) -> DensityMatrix {
    let d = values.len();
    let m = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            c(values[i], 0.0)
        } else {
            Complex64::default()
        }
    });
    DensityMatrix::from_matrix(m).unwrap().into_physical_checked().unwrap()
}

fn physical(m: DMatrix<Complex64>) -> DensityMatrix {
    DensityMatrix::from_matrix(m).unwrap().into_physical_checked().unwrap()
}

#[test]
fn self_fidelity_is_one() {
    let mut r = rng(3);
    for d in [2usize, 3, 4, 8] {
        let state = physical(random_physical(d, &mut r));
        let f = fidelity(&state, &state).unwrap();
        assert!(f <= 1.0 && f > 1.0 - 1e-12, "self fidelity {f}");
        assert!(infidelity(&state, &state).unwrap() < 1e-12);
    }
}

#[test]
fn orthogonal_pure_states_have_zero_fidelity() {
    let zero = DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let one = DensityMatrix::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert!(fidelity(&zero, &one).unwrap() < 1e-15);
    assert!((infidelity(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn mixed_versus_pure_worked_example() {
    let mixed = DensityMatrix::maximally_mixed(2);
    let zero = DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let f = fidelity(&mixed, &zero).unwrap();
    assert!((f - 0.5f64.sqrt()).abs() < 1e-12, "fidelity {f}");
    assert!((infidelity(&mixed, &zero).unwrap() - (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
}

#[test]
fn fidelity_is_symmetric() {
    let mut r = rng(15);
    for _ in 0..10 {
        let a = physical(random_physical(3, &mut r));
        let b = physical(random_physical(3, &mut r));
        let fab = fidelity(&a, &b).unwrap();
        let fba = fidelity(&b, &a).unwrap();
        assert!((fab - fba).abs() < 1e-9, "{fab} vs {fba}");
        assert!((0.0..=1.0).contains(&fab));
    }
}

#[test]
fn fidelity_is_unitarily_invariant() {
    let mut r = rng(25);
    for _ in 0..5 {
        let a = random_physical(3, &mut r);
        let b = random_physical(3, &mut r);
        // Eigenvectors of a random Hermitian matrix form a unitary.
        let (_, u) = jacobi_hermitian(&random_hermitian(3, &mut r));
        let ua = &u * &a * u.adjoint();
        let ub = &u * &b * u.adjoint();
        let plain = fidelity(&physical(a), &physical(b)).unwrap();
        let rotated = fidelity(&physical(ua), &physical(ub)).unwrap();
        assert!((plain - rotated).abs() < 1e-9, "{plain} vs {rotated}");
    }
}

#[test]
fn diagonal_fidelity_matches_classical_overlap() {
    let mut r = rng(35);
    for d in 2..=8 {
        // Two random probability vectors via the simplex oracle.
        let va: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.5)).collect();
        let vb: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.5)).collect();
        let mut a = simplex_qp_oracle(&va, 1.0);
        let mut b = simplex_qp_oracle(&vb, 1.0);
        // Keep strictly positive entries so the classical formula is exact.
        for x in a.iter_mut().chain(b.iter_mut()) {
            *x = (*x + 0.05) / (1.0 + 0.05 * d as f64);
        }
        let classical: f64 = a.iter().zip(&b).map(|(&x, &y)| (x * y).sqrt()).sum();
        let f = fidelity(&diag_state(&a), &diag_state(&b)).unwrap();
        assert!(
            (f - classical).abs() < 1e-10,
            "d={d}: {f} vs classical {classical}"
        );
    }
}

#[test]
fn purity_worked_examples() {
    for d in [2usize, 4, 8] {
        let p = purity(&DensityMatrix::maximally_mixed(d)).unwrap();
        assert!((p - 1.0 / d as f64).abs() < 1e-12);
    }
    let pure = DensityMatrix::from_pure(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
    assert!((purity(&pure).unwrap() - 1.0).abs() < 1e-10);
    assert!((purity(&diag_state(&[0.75, 0.25])).unwrap() - 0.625).abs() < 1e-12);
}

#[test]
fn metrics_reject_unphysical_inputs() {
    let bad = DensityMatrix::from_matrix(DMatrix::from_row_slice(
        2,
        2,
        &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)],
    ))
    .unwrap();
    let good = DensityMatrix::maximally_mixed(2);
    assert!(matches!(fidelity(&bad, &good), Err(Error::InvalidInput(_))));
    assert!(matches!(fidelity(&good, &bad), Err(Error::InvalidInput(_))));
    assert!(matches!(purity(&bad), Err(Error::InvalidInput(_))));
}
