//! Cluster-head probability and node weights for a handful of nodes.
//!
//! Lower weight means a better head candidate.

use paiwca::clustering::{compute_chprob, compute_weight, ChprobParams, NodeAttrs, WeightParams};
use paiwca::energy::EnergyState;

fn main() -> paiwca::Result<()> {
    let chprob = ChprobParams::default();
    let weights = WeightParams::default();

    // (label, residual J, capacity J, range m, mean speed m/s)
    let nodes = [
        ("fresh, short range", 80.0, 80.0, 20.0, 2.0),
        ("fresh, long range", 80.0, 80.0, 70.0, 2.0),
        ("half empty", 40.0, 80.0, 70.0, 2.0),
        ("fast mover", 80.0, 80.0, 70.0, 9.0),
        ("nearly dead", 0.5, 60.0, 35.0, 5.0),
    ];

    println!("{:<20} {:>8} {:>10}", "node", "chprob", "weight");
    for (label, residual, capacity, tr, mv) in nodes {
        let e = EnergyState::new(residual, capacity)?;
        let p = compute_chprob(&e, tr, &chprob)?;
        let attrs = NodeAttrs {
            tr,
            tx: 0.02,
            mv,
            pv: capacity - residual,
            chprob: p,
        };
        println!(
            "{label:<20} {p:>8.4} {:>10.4}",
            compute_weight(&attrs, &weights)
        );
    }

    // the same node with the probability term left out
    let plain = WeightParams {
        include_chprob_term: false,
        ..weights
    };
    let attrs = NodeAttrs {
        tr: 50.0,
        tx: 0.02,
        mv: 10.0,
        pv: 5.0,
        chprob: 0.5,
    };
    println!(
        "\nweight with chprob term {:.3}, without {:.3}",
        compute_weight(&attrs, &weights),
        compute_weight(&attrs, &plain)
    );
    Ok(())
}
