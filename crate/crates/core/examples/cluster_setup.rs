//! Initial clustering of a small static network.

use paiwca::clustering::{
    cluster_setup, compute_chprob, validate_assignment, NodeAttrs, PaiwcaParams, Role,
};
use paiwca::energy::EnergyState;
use paiwca::mobility::{build_neighbor_graph, Position};

fn main() -> paiwca::Result<()> {
    let positions = [
        (50.0, 50.0),
        (90.0, 60.0),
        (70.0, 110.0),
        (200.0, 200.0),
        (240.0, 190.0),
        (230.0, 240.0),
        (400.0, 400.0),
    ]
    .map(|(x, y)| Position::new(x, y));
    let ranges = [60.0, 70.0, 65.0, 60.0, 70.0, 55.0, 40.0];
    let batteries = [70.0, 30.0, 55.0, 80.0, 20.0, 45.0, 60.0];

    let params = PaiwcaParams::default();
    let g = build_neighbor_graph(&positions, &ranges);
    let attrs: Vec<NodeAttrs> = (0..positions.len())
        .map(|i| {
            let e = EnergyState::full(batteries[i]);
            Ok(NodeAttrs {
                tr: ranges[i],
                tx: 0.02,
                mv: 0.0,
                pv: 0.0,
                chprob: compute_chprob(&e, ranges[i], &params.chprob)?,
            })
        })
        .collect::<paiwca::Result<_>>()?;

    let a = cluster_setup(&g, &attrs, &params);
    validate_assignment(&a, &g).expect("setup output is a valid clustering");

    println!("{} edges, {} clusters", g.edge_count(), a.cluster_count());
    for head in a.heads() {
        println!("head {head}: members {:?}", a.members_of(head));
    }
    for id in 0..positions.len() {
        if a.is_gateway(id) {
            println!("node {id} is a gateway");
        }
        if let Role::Member(h) = a.role(id) {
            assert!(g.has_edge(id, h));
        }
    }
    Ok(())
}
