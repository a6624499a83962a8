mod common;

use common::{jacobi_hermitian, noiseless_clicks, z_ensemble};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::str::FromStr;
use tomo::metrics::fidelity;
use tomo::simulate::{beta_family_ensemble, generate, BasisFamily, ExperimentSpec};
use tomo::solvers::{
    solve, solve_dia_observed, stopping_rule, Algorithm, SolverConfig, Termination,
};
use tomo::{op_counts, reset_op_counts, ClickVector, DensityMatrix, Error};

fn noisy_two_qubit() -> (DensityMatrix, tomo::MeasurementEnsemble, ClickVector) {
    generate(&ExperimentSpec {
        qubits: 2,
        basis_family: BasisFamily::PauliMub,
        events_per_outcome: 1e4,
        purity: 0.5,
        seed: 2024,
    })
    .unwrap()
}

#[test]
fn all_algorithms_recover_noiseless_pure_states() {
    for qubits in [1u32, 2] {
        let d = 1usize << qubits;
        let ensemble = beta_family_ensemble(qubits, std::f64::consts::FRAC_PI_2).unwrap();
        let mut ket = vec![Complex64::default(); d];
        ket[0] = Complex64::new(1.0, 0.0);
        let truth = DensityMatrix::from_pure(&ket).unwrap();
        let clicks = noiseless_clicks(&truth, &ensemble, 1e4);
        for algorithm in Algorithm::ALL {
            let report = solve(&ensemble, &clicks, &SolverConfig::new(algorithm)).unwrap();
            let f = fidelity(&report.final_state, &truth).unwrap();
            assert!(
                f > 1.0 - 1e-6,
                "{algorithm} at {qubits} qubits: fidelity {f}, {:?}",
                report.termination
            );
        }
    }
}

#[test]
fn zero_iteration_budget_returns_the_initial_state() {
    let (_, ensemble, clicks) = noisy_two_qubit();
    for algorithm in [Algorithm::Pgd, Algorithm::Pgdb, Algorithm::Dia] {
        let config = SolverConfig::new(algorithm).with_max_iterations(0);
        let report = solve(&ensemble, &clicks, &config).unwrap();
        assert_eq!(report.history.len(), 1, "{algorithm}");
        assert_eq!(report.termination, Termination::MaxIterations);
        let mixed = DensityMatrix::maximally_mixed(4);
        let diff = report.final_state.entries() - mixed.entries();
        assert!(diff.iter().all(|z| z.norm() < 1e-12), "{algorithm}");
    }
}

#[test]
fn stopping_rule_window_behavior() {
    let config = SolverConfig::new(Algorithm::Pgd);
    assert_eq!(config.stop_window, 20);
    assert_eq!(config.stop_threshold, 1e-5);

    let constant = vec![1.0; 20];
    assert!(!stopping_rule(&constant, &config), "window needs 21 entries");
    let constant = vec![1.0; 21];
    assert!(stopping_rule(&constant, &config));

    let slow: Vec<f64> = (0..21).map(|k| 1.0 - 1e-7 * k as f64).collect();
    assert!(stopping_rule(&slow, &config), "total drift 2e-6 is under 1e-5");
    let fast: Vec<f64> = (0..21).map(|k| 1.0 - 1e-6 * k as f64).collect();
    assert!(!stopping_rule(&fast, &config), "total drift 2e-5 exceeds 1e-5");

    let capped = SolverConfig::new(Algorithm::Pgd).with_max_iterations(5);
    let wild: Vec<f64> = (0..6).map(|k| (k as f64).sin() * 10.0).collect();
    assert!(stopping_rule(&wild, &capped), "budget exhausted");
    assert!(!stopping_rule(&wild[..5], &capped));
}

#[test]
fn backtracking_costs_never_increase() {
    let (_, ensemble, clicks) = noisy_two_qubit();
    let report = solve(&ensemble, &clicks, &SolverConfig::new(Algorithm::Pgdb)).unwrap();
    assert_eq!(report.termination, Termination::Converged);
    for pair in report.history.windows(2) {
        assert!(
            pair[1].cost_per_outcome <= pair[0].cost_per_outcome + 1e-12,
            "cost rose from {} to {} at iteration {}",
            pair[0].cost_per_outcome,
            pair[1].cost_per_outcome,
            pair[1].iteration
        );
    }
}

#[test]
fn multiplicative_iterates_stay_physical_without_projection() {
    let (_, ensemble, clicks) = noisy_two_qubit();
    reset_op_counts();
    let mut visited = 0usize;
    let report = solve_dia_observed(
        &ensemble,
        &clicks,
        &SolverConfig::new(Algorithm::Dia),
        |_, state| {
            visited += 1;
            let (lam, _) = jacobi_hermitian(state.entries());
            assert!(
                lam.iter().all(|&l| l >= -1e-10),
                "negative eigenvalue in {lam:?}"
            );
            let trace: f64 = lam.iter().sum();
            assert!((trace - 1.0).abs() < 1e-10, "trace {trace}");
        },
    )
    .unwrap();
    assert_eq!(visited, report.history.len());
    assert_eq!(op_counts().projections, 0, "the multiplicative flow never projects");
}

#[test]
fn multiplicative_solver_rejects_rank_deficient_designs() {
    // Four copies of the same bra: enough rows to claim completeness, but the
    // frame operator is singular.
    let mut rows = DMatrix::<Complex64>::zeros(4, 2);
    for i in 0..4 {
        rows[(i, 0)] = Complex64::new(1.0, 0.0);
    }
    let ensemble =
        tomo::MeasurementEnsemble::new(rows, vec![vec![0, 1, 2, 3]], true).unwrap();
    let clicks = ClickVector::with_scale(vec![1.0, 1.0, 1.0, 1.0], 8.0).unwrap();
    match solve(&ensemble, &clicks, &SolverConfig::new(Algorithm::Dia)) {
        Err(Error::IllConditioned(_)) => {}
        other => panic!("expected IllConditioned, got {other:?}"),
    }
}

#[test]
fn accelerated_first_step_matches_plain_descent() {
    let (_, ensemble, clicks) = noisy_two_qubit();
    let pgd = solve(
        &ensemble,
        &clicks,
        &SolverConfig::new(Algorithm::Pgd).with_max_iterations(3),
    )
    .unwrap();
    let fista = solve(
        &ensemble,
        &clicks,
        &SolverConfig::new(Algorithm::Fista).with_max_iterations(3),
    )
    .unwrap();
    // The first update has no history to extrapolate and the second lands on
    // the zero of the momentum schedule, so the first three recorded costs
    // coincide bit for bit; the fourth diverges.
    for i in 0..3 {
        assert_eq!(
            pgd.history[i].cost_per_outcome.to_bits(),
            fista.history[i].cost_per_outcome.to_bits(),
            "record {i}"
        );
    }
    assert!(pgd.history[3].cost_per_outcome != fista.history[3].cost_per_outcome);
}

#[test]
fn repeated_runs_are_bitwise_identical() {
    let (_, ensemble, clicks) = noisy_two_qubit();
    for algorithm in Algorithm::ALL {
        let config = SolverConfig::new(algorithm).with_max_iterations(60);
        let a = solve(&ensemble, &clicks, &config).unwrap();
        let b = solve(&ensemble, &clicks, &config).unwrap();
        assert_eq!(a.history.len(), b.history.len(), "{algorithm}");
        for (x, y) in a.history.iter().zip(&b.history) {
            assert_eq!(x.iteration, y.iteration);
            assert_eq!(
                x.cost_per_outcome.to_bits(),
                y.cost_per_outcome.to_bits(),
                "{algorithm} diverged at iteration {}",
                x.iteration
            );
        }
        assert_eq!(a.final_state.entries(), b.final_state.entries(), "{algorithm}");
        assert_eq!(a.termination, b.termination);
    }
}

#[test]
fn descent_operation_counts_are_exact() {
    let (_, ensemble, clicks) = noisy_two_qubit();
    for algorithm in [Algorithm::Pgd, Algorithm::Pgdm, Algorithm::Fista] {
        reset_op_counts();
        let report = solve(&ensemble, &clicks, &SolverConfig::new(algorithm)).unwrap();
        let counts = op_counts();
        let n = report.history.len() as u64;
        assert_eq!(counts.forward_passes, n, "{algorithm}: one forward per record");
        assert_eq!(counts.projections, n, "{algorithm}: one projection per record");
        assert_eq!(counts.gradient_passes, n - 1, "{algorithm}: no gradient after the last record");
    }
}

#[test]
fn line_search_operation_counts_bound_the_iterations() {
    let (_, ensemble, clicks) = noisy_two_qubit();
    reset_op_counts();
    let report = solve(&ensemble, &clicks, &SolverConfig::new(Algorithm::Pgdb)).unwrap();
    let counts = op_counts();
    let n = report.history.len() as u64;
    assert!(counts.forward_passes >= n, "line search re-evaluates the cost");
    assert!(counts.projections >= n - 1 && counts.projections <= n + 1);
    assert!(counts.gradient_passes >= n - 1 && counts.gradient_passes <= n);

    reset_op_counts();
    let report = solve(&ensemble, &clicks, &SolverConfig::new(Algorithm::Dia)).unwrap();
    let counts = op_counts();
    let n = report.history.len() as u64;
    assert_eq!(counts.projections, 0);
    assert!(
        counts.forward_passes >= 10 * (n - 1),
        "the dilution search evaluates many trial costs per update"
    );
}

#[test]
fn solvers_agree_on_the_maximum_likelihood_state() {
    let (_, ensemble, clicks) = noisy_two_qubit();
    let a = solve(&ensemble, &clicks, &SolverConfig::new(Algorithm::Pgd)).unwrap();
    let b = solve(&ensemble, &clicks, &SolverConfig::new(Algorithm::Pgdb)).unwrap();
    let f = fidelity(&a.final_state, &b.final_state).unwrap();
    assert!(f >= 0.999, "solver disagreement: fidelity {f}");
    let gap = (a.final_cost_per_outcome() - b.final_cost_per_outcome()).abs();
    assert!(gap <= 0.02, "cost gap {gap}");
}

#[test]
fn algorithm_names_round_trip() {
    assert_eq!(Algorithm::ALL.len(), 5);
    for algorithm in Algorithm::ALL {
        let parsed = Algorithm::from_str(algorithm.name()).unwrap();
        assert_eq!(parsed, algorithm);
        assert_eq!(format!("{algorithm}"), algorithm.name());
    }
    let err = Algorithm::from_str("newton").unwrap_err();
    assert!(err.to_string().contains("unknown algorithm"), "{err}");
}

#[test]
fn config_validation_rejects_bad_values() {
    let base = SolverConfig::new(Algorithm::Pgd);
    assert!(base.validate().is_ok());

    let mut bad = base.clone();
    bad.stop_threshold = -1.0;
    assert!(bad.validate().is_err());

    let mut bad = base.clone();
    bad.inertia = 1.0;
    assert!(bad.validate().is_err());

    let mut bad = base.clone();
    bad.backtrack_shrink = 0.0;
    assert!(bad.validate().is_err());

    let mut bad = base.clone();
    bad.step_size = Some(-0.5);
    assert!(bad.validate().is_err());

    let mut bad = base.clone();
    bad.stop_window = 0;
    assert!(bad.validate().is_err());
}

#[test]
fn solver_prechecks_reject_malformed_problems() {
    // Not informationally complete.
    let clicks = ClickVector::with_scale(vec![5.0, 5.0], 20.0).unwrap();
    match solve(&z_ensemble(), &clicks, &SolverConfig::new(Algorithm::Pgd)) {
        Err(Error::InvalidInput(_)) => {}
        other => panic!("expected InvalidInput, got {other:?}"),
    }

    let (_, ensemble, clicks) = noisy_two_qubit();
    // Scale stripped away.
    match solve(&ensemble, &clicks.discard_scale(), &SolverConfig::new(Algorithm::Pgd)) {
        Err(Error::MissingScale) => {}
        other => panic!("expected MissingScale, got {other:?}"),
    }
    // Length mismatch.
    let short = ClickVector::with_scale(vec![1.0; 6], 10.0).unwrap();
    match solve(&ensemble, &short, &SolverConfig::new(Algorithm::Pgd)) {
        Err(Error::Dimension { expected: 36, got: 6 }) => {}
        other => panic!("expected Dimension, got {other:?}"),
    }
}
