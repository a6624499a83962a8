//! Tomography degrades as the measurement bases collapse toward each other.
//! The β-parameterized family interpolates from the Pauli MUBs (β = π/2,
//! cos²β = 0) toward a single basis (β → 0): the design matrix's condition
//! number grows and the reconstruction fidelity falls.

use tomo::metrics::infidelity;
use tomo::simulate::{self, BasisFamily, ExperimentSpec};
use tomo::solvers::{solve_pgdb, Algorithm, SolverConfig};

fn main() -> tomo::Result<()> {
    let trials = 5;
    println!("{:>8} {:>10} {:>14} {:>16}", "cos2beta", "beta", "condition", "mean infidelity");
    for cos2 in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let beta = (cos2 as f64).sqrt().acos();
        let ensemble = simulate::beta_family_ensemble(2, beta)?;
        let condition = simulate::condition_number(&ensemble);

        let mut total = 0.0;
        for trial in 0..trials {
            let spec = ExperimentSpec {
                qubits: 2,
                basis_family: BasisFamily::BetaFamily { beta },
                events_per_outcome: 10_000.0,
                purity: 0.5,
                seed: 100 + trial,
            };
            let (truth, ensemble, clicks) = simulate::generate(&spec)?;
            let report = solve_pgdb(&ensemble, &clicks, &SolverConfig::new(Algorithm::Pgdb))?;
            total += infidelity(&report.final_state, &truth)?;
        }
        println!(
            "{cos2:>8.1} {beta:>10.4} {condition:>14.2} {:>16.6}",
            total / trials as f64
        );
    }
    Ok(())
}
