//! The file formats behind the CLI, driven from the library: pack an
//! experiment into a bundle (JSON with base64 little-endian float64 planes),
//! read it back, reconstruct, and round-trip the run record.

use tomo::cli::{read_records_jsonl, write_records_jsonl, DataBundle, RunRecord};
use tomo::metrics::fidelity;
use tomo::simulate::{self, BasisFamily, ExperimentSpec};
use tomo::solvers::{solve, Algorithm, SolverConfig};

fn main() -> tomo::Result<()> {
    let dir = std::env::temp_dir().join("tomo_pipeline_example");
    std::fs::create_dir_all(&dir).expect("create temp dir");

    let spec = ExperimentSpec {
        qubits: 1,
        basis_family: BasisFamily::PauliMub,
        events_per_outcome: 10_000.0,
        purity: 0.5,
        seed: 5,
    };
    let (truth, ensemble, clicks) = simulate::generate(&spec)?;

    let bundle_path = dir.join("bundle.json");
    let bundle = DataBundle::pack(&spec, &truth, &ensemble, &clicks);
    std::fs::write(&bundle_path, serde_json::to_string_pretty(&bundle).unwrap())
        .expect("write bundle");
    println!("bundle: {}", bundle_path.display());

    let reread: DataBundle =
        serde_json::from_str(&std::fs::read_to_string(&bundle_path).unwrap()).unwrap();
    let (truth2, ensemble2, clicks2) = reread.unpack()?;
    assert_eq!(truth.entries(), truth2.entries());
    assert_eq!(ensemble.rows(), ensemble2.rows());
    assert_eq!(clicks.counts(), clicks2.counts());
    println!("bundle round-trip: lossless");

    let report = solve(&ensemble2, &clicks2, &SolverConfig::new(Algorithm::Pgdb))?;
    let record = RunRecord::from_report(
        spec,
        Algorithm::Pgdb,
        &report,
        Some(fidelity(&report.final_state, &truth2)?),
        simulate::condition_number(&ensemble2),
    );

    let records_path = dir.join("records.jsonl");
    write_records_jsonl(&records_path, std::slice::from_ref(&record))?;
    let reread = read_records_jsonl(&records_path)?;
    assert_eq!(reread.len(), 1);
    assert_eq!(reread[0], record);
    println!("record round-trip: lossless ({} history points)", record.history.len());
    Ok(())
}
