//! Reading, overriding and re-emitting a scenario file.

use paiwca::config::ScenarioConfig;

const SCENARIO: &str = "
# dense, slow network
nodes = 120
speed.min = 0.5
speed.max = 12
pause = 20
range.fixed = 90
algorithm = wca
energy.drain_ch = 0.2
arrival.0 = 50 250 250 70 60 0.8
";

fn main() {
    let mut cfg = ScenarioConfig::from_kv_str(SCENARIO).expect("valid scenario");
    cfg.seed = 9;
    cfg.validate().expect("within bounds");
    println!(
        "{} nodes (+{} arriving), {:?}",
        cfg.node_count,
        cfg.arrivals.len(),
        cfg.range
    );

    let text = cfg.to_kv_string();
    assert_eq!(ScenarioConfig::from_kv_str(&text).unwrap(), cfg);
    println!(
        "resolved file has {} keys, round trip ok",
        text.lines().count()
    );

    for bad in ["nodes = 500", "energy.drain_xx = 1", "pause = later"] {
        let err = ScenarioConfig::from_kv_str(bad)
            .and_then(|c| c.validate().map(|_| c))
            .unwrap_err();
        println!("{bad:<22} -> {err}");
    }
}
