//! Packet delivery on a static network and the same network in motion.

use paiwca::config::{Algorithm, RangeSpec, ScenarioConfig};
use paiwca::energy::EnergyModel;
use paiwca::engine::run;

fn main() -> paiwca::Result<()> {
    let mut base = ScenarioConfig {
        node_count: 50,
        range: RangeSpec::Fixed(120.0),
        energy: EnergyModel::lossless(),
        sim_time: 300.0,
        pause: f64::INFINITY,
        ..ScenarioConfig::default()
    };
    base.flow.source_count = Some(20);

    println!(
        "{:<16} {:>10} {:>10} {:>12}",
        "algorithm", "static", "mobile", "delay (mob)"
    );
    for algorithm in Algorithm::ALL {
        let fixed = run(&ScenarioConfig {
            algorithm,
            ..base.clone()
        })?;
        let moving = run(&ScenarioConfig {
            algorithm,
            pause: 0.0,
            ..base.clone()
        })?;
        println!(
            "{:<16} {:>10.4} {:>10.4} {:>12.3}",
            algorithm.name(),
            fixed.summary.pdr,
            moving.summary.pdr,
            moving.summary.mean_delay
        );
    }
    Ok(())
}
