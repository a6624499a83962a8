//! Cost-per-outcome trace of one reconstruction, printed every few
//! iterations: the raw material of a convergence plot. The optimum of the
//! Gaussian cost sits near C/N ≈ 1 for Poisson data at this scale.

use tomo::simulate::{BasisFamily, ExperimentSpec};
use tomo::solvers::{solve_pgdm, Algorithm, SolverConfig};

fn main() -> tomo::Result<()> {
    let spec = ExperimentSpec {
        qubits: 2,
        basis_family: BasisFamily::PauliMub,
        events_per_outcome: 10_000.0,
        purity: 0.5,
        seed: 7,
    };
    let (_, ensemble, clicks) = tomo::simulate::generate(&spec)?;

    let config = SolverConfig::new(Algorithm::Pgdm);
    let report = solve_pgdm(&ensemble, &clicks, &config)?;

    println!("{:>9}  {:>14}  {:>10}", "iteration", "C/N", "seconds");
    let stride = (report.history.len() / 20).max(1);
    for point in report.history.iter().step_by(stride) {
        println!(
            "{:>9}  {:>14.8}  {:>10.4}",
            point.iteration, point.cost_per_outcome, point.seconds
        );
    }
    let last = report.history.last().unwrap();
    println!("{:>9}  {:>14.8}  {:>10.4}", last.iteration, last.cost_per_outcome, last.seconds);
    println!("\nterminated: {} after {} iterations", report.termination, report.iterations());
    Ok(())
}
