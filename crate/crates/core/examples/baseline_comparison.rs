//! All five head-election schemes on one random topology.

use paiwca::config::{Algorithm, ScenarioConfig};
use paiwca::engine::Simulation;

fn main() -> paiwca::Result<()> {
    println!(
        "{:<16} {:>8} {:>10}  heads",
        "algorithm", "clusters", "gateways"
    );
    for algorithm in Algorithm::ALL {
        let cfg = ScenarioConfig {
            node_count: 40,
            seed: 3,
            sim_time: 0.0,
            algorithm,
            ..ScenarioConfig::default()
        };
        // same seed, so every algorithm sees the same placement
        let sim = Simulation::new(&cfg)?;
        let a = sim.assignment();
        let gateways = (0..cfg.node_count).filter(|&i| a.is_gateway(i)).count();
        let heads = a.heads();
        let shown: Vec<String> = heads.iter().take(12).map(|h| h.to_string()).collect();
        println!(
            "{:<16} {:>8} {:>10}  {}{}",
            algorithm.name(),
            a.cluster_count(),
            gateways,
            shown.join(" "),
            if heads.len() > 12 { " ..." } else { "" }
        );
    }
    Ok(())
}
