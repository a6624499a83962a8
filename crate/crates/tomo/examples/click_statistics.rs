//! Poisson click statistics. Counts are drawn as n_i ~ Poisson(r·p_i); the
//! Gaussian cost evaluated at the true state then averages C/N ≈ 1 — the
//! value a well-converged reconstruction should also land near.

use tomo::likelihood::cost_gaussian;
use tomo::simulate::{BasisFamily, ExperimentSpec};

fn main() -> tomo::Result<()> {
    let trials = 50;
    let mut costs = Vec::with_capacity(trials);
    let mut total_clicks = 0.0;
    for trial in 0..trials {
        let spec = ExperimentSpec {
            qubits: 2,
            basis_family: BasisFamily::PauliMub,
            events_per_outcome: 10_000.0,
            purity: 0.5,
            seed: trial as u64,
        };
        let (truth, ensemble, clicks) = tomo::simulate::generate(&spec)?;
        let report = cost_gaussian(&truth, &ensemble, &clicks)?;
        costs.push(report.cost / ensemble.len() as f64);
        total_clicks += clicks.total();
    }
    let mean = costs.iter().sum::<f64>() / costs.len() as f64;
    let var = costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (costs.len() - 1) as f64;
    println!("trials: {trials}");
    println!("mean clicks per experiment: {:.0}", total_clicks / trials as f64);
    println!("C/N at the true state: mean {mean:.4}, stddev {:.4}", var.sqrt());
    println!("(expected mean ≈ 1 for Poisson counts at r·p ≫ 1)");
    Ok(())
}
