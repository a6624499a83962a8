//! Exact-data sanity check: with noiseless clicks n_i = r·p_i from a pure
//! state, every solver recovers the true state to near-perfect fidelity.

use num_complex::Complex64;
use tomo::solvers::{solve, Algorithm, SolverConfig};
use tomo::{forward_probabilities, metrics, simulate, ClickVector, DensityMatrix};

fn main() -> tomo::Result<()> {
    for qubits in 1..=3u32 {
        let d = 1usize << qubits;
        let ensemble = simulate::pauli_product_ensemble(qubits)?;

        let mut ket = vec![Complex64::new(0.0, 0.0); d];
        ket[0] = Complex64::new(1.0, 0.0);
        let truth = DensityMatrix::from_pure(&ket)?;

        let r = 10_000.0 * d as f64;
        let p = forward_probabilities(&truth, &ensemble)?;
        let counts: Vec<f64> = p.values().iter().map(|&pi| r * pi).collect();
        let clicks = ClickVector::with_scale(counts, r)?;

        for algorithm in Algorithm::ALL {
            let report = solve(&ensemble, &clicks, &SolverConfig::new(algorithm))?;
            let fid = metrics::fidelity(&report.final_state, &truth)?;
            println!(
                "{qubits} qubit(s) {algorithm:>5}: {:>5} iterations, fidelity {fid:.9}",
                report.iterations()
            );
        }
    }
    Ok(())
}
