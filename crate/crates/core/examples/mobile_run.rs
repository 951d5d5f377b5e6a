//! One mobile run with per-tick metrics written to CSV.
//!
//! Output goes to `$PAIWCA_OUT_DIR` (default `out/`).

use paiwca::config::ScenarioConfig;
use paiwca::engine::run;
use paiwca::report::{default_out_dir, emit_series_csv};

fn main() -> paiwca::Result<()> {
    let mut cfg = ScenarioConfig {
        node_count: 60,
        seed: 42,
        ..ScenarioConfig::default()
    };
    cfg.speed.max = 20.0;

    let out = run(&cfg)?;
    println!("tick  clusters  conn    updates  alive");
    for r in out.series.iter().step_by(50) {
        println!(
            "{:>4}  {:>8}  {:.3}  {:>7}  {:>5}",
            r.tick, r.cluster_count, r.connectivity, r.dominant_set_updates, r.alive_nodes
        );
    }
    let s = &out.summary;
    println!(
        "\n{} updates to the head set, mean connectivity {:.3}, pdr {:.3}",
        s.dominant_set_updates, s.mean_connectivity, s.pdr
    );

    let path = default_out_dir().join("mobile_run.csv");
    emit_series_csv(&out.series, &path)?;
    println!("series written to {}", path.display());
    Ok(())
}
