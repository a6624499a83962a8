//! Runtime growth with system size. The ensemble has 6ⁿ rows and each
//! iteration costs O(N·d²), so every extra qubit multiplies the work by ~24;
//! iteration counts stay roughly flat.

use std::time::Instant;

use tomo::simulate::{BasisFamily, ExperimentSpec};
use tomo::solvers::{solve, Algorithm, SolverConfig};

fn main() -> tomo::Result<()> {
    println!(
        "{:>6} {:>8} {:>6} {:>10} {:>10} {:>10}",
        "qubits", "rows", "alg", "iters", "seconds", "C/N"
    );
    for qubits in 1..=3u32 {
        for algorithm in [Algorithm::Pgdm, Algorithm::Pgdb] {
            let spec = ExperimentSpec {
                qubits,
                basis_family: BasisFamily::PauliMub,
                events_per_outcome: 10_000.0,
                purity: 0.5,
                seed: 11,
            };
            let (_, ensemble, clicks) = tomo::simulate::generate(&spec)?;
            let start = Instant::now();
            let report = solve(&ensemble, &clicks, &SolverConfig::new(algorithm))?;
            println!(
                "{qubits:>6} {:>8} {:>6} {:>10} {:>10.3} {:>10.5}",
                ensemble.len(),
                algorithm.name(),
                report.iterations(),
                start.elapsed().as_secs_f64(),
                report.final_cost_per_outcome()
            );
        }
    }
    Ok(())
}
