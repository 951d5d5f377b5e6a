//! Connectivity against transmission range, averaged over seeds.

use paiwca::config::{Algorithm, ScenarioConfig};
use paiwca::sweep::{sweep, SweepAxis, SweepSpec};

fn main() -> paiwca::Result<()> {
    let base = ScenarioConfig {
        node_count: 50,
        sim_time: 100.0,
        ..ScenarioConfig::default()
    };
    let spec = SweepSpec {
        axis: SweepAxis::Range,
        values: vec![5.0, 25.0, 50.0, 75.0, 100.0, 150.0, 200.0],
        seeds: (1..=8).collect(),
        algorithms: vec![Algorithm::Paiwca, Algorithm::Wca],
    };
    println!(
        "{:<8} {:>6} {:>12} {:>10}",
        "alg", "tr", "connectivity", "clusters"
    );
    for row in sweep(&base, &spec)? {
        println!(
            "{:<8} {:>6} {:>7.3} ±{:.3} {:>10.1}",
            row.algorithm.name(),
            row.value,
            row.connectivity.mean,
            row.connectivity.std,
            row.clusters.mean
        );
    }
    Ok(())
}
