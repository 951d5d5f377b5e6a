//! A 14th node joins a settled 13-node network.

use paiwca::config::ScenarioConfig;
use paiwca::engine::Simulation;

fn main() -> paiwca::Result<()> {
    let cfg = ScenarioConfig::arrival_scenario();
    let newcomer = cfg.node_count;
    let arrival = cfg.arrivals[0];
    let mut sim = Simulation::new(&cfg)?;

    while sim.tick() + 1 < arrival.tick {
        sim.step()?;
    }
    let before = sim.assignment().clone();
    println!("heads before tick {}: {:?}", arrival.tick, before.heads());

    sim.step()?;
    let a = sim.assignment();
    println!(
        "node {newcomer} arrives at ({}, {}) with chprob {:.4}",
        arrival.x,
        arrival.y,
        sim.attrs()[newcomer].chprob
    );
    for &n in sim.graph().neighbors(newcomer) {
        if before.role(n).is_head() {
            println!(
                "  neighboring head {n}: chprob {:.4}, now {:?}",
                sim.attrs()[n].chprob,
                a.role(n)
            );
        }
    }
    println!("  newcomer role: {:?}", a.role(newcomer));
    println!("heads after: {:?} (epoch {})", a.heads(), a.epoch());
    Ok(())
}
