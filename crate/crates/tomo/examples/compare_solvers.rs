//! All five solvers on one noisy 2-qubit experiment: they disagree on speed
//! but agree on the answer (same cost, mutually consistent states).

use tomo::metrics::fidelity;
use tomo::simulate::{BasisFamily, ExperimentSpec};
use tomo::solvers::{solve, Algorithm, SolverConfig};

fn main() -> tomo::Result<()> {
    let spec = ExperimentSpec {
        qubits: 2,
        basis_family: BasisFamily::PauliMub,
        events_per_outcome: 10_000.0,
        purity: 0.5,
        seed: 2024,
    };
    let (truth, ensemble, clicks) = tomo::simulate::generate(&spec)?;

    println!("{:>5}  {:>10} {:>12} {:>12} {:>10}", "alg", "iterations", "C/N", "fid(true)", "seconds");
    let mut finals = Vec::new();
    for algorithm in Algorithm::ALL {
        let report = solve(&ensemble, &clicks, &SolverConfig::new(algorithm))?;
        let fid = fidelity(&report.final_state, &truth)?;
        println!(
            "{:>5}  {:>10} {:>12.6} {:>12.6} {:>10.3}",
            algorithm.name(),
            report.iterations(),
            report.final_cost_per_outcome(),
            fid,
            report.seconds()
        );
        finals.push((algorithm, report.final_state));
    }

    let mut worst = 1.0f64;
    for i in 0..finals.len() {
        for j in (i + 1)..finals.len() {
            worst = worst.min(fidelity(&finals[i].1, &finals[j].1)?);
        }
    }
    println!("\nworst pairwise fidelity between final states: {worst:.9}");
    Ok(())
}
