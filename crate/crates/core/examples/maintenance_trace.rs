//! Step-by-step maintenance on a hand-built three-node scenario.
//!
//! Node 2 is a member of head 0, drifts out of range, waits alone past the
//! orphan timeout and declares itself head.

use paiwca::clustering::{
    maintain_on_move, ClusterAssignment, NodeAttrs, OrphanTimers, PaiwcaParams, Role,
};
use paiwca::mobility::NeighborGraph;

fn main() {
    let params = PaiwcaParams::default();
    let attrs = vec![
        NodeAttrs {
            tr: 60.0,
            chprob: 0.4,
            ..NodeAttrs::default()
        };
        3
    ];
    let start = NeighborGraph::from_edges(3, &[(0, 1), (0, 2)]);
    let mut a =
        ClusterAssignment::from_roles(vec![Role::Head, Role::Member(0), Role::Member(0)], &start);
    let mut timers = OrphanTimers::new(3);

    // node 2 is now out of everyone's range
    let apart = NeighborGraph::from_edges(3, &[(0, 1)]);
    for tick in 1..=params.orphan_timeout + 2 {
        a = maintain_on_move(&a, &apart, &attrs, &mut timers, &params);
        println!(
            "tick {tick}: node 2 {:?}, waited {} ticks, heads {:?}, epoch {}",
            a.role(2),
            timers.get(2),
            a.heads(),
            a.epoch()
        );
    }

    // it drifts back next to head 0 but stays a head itself
    let back = NeighborGraph::from_edges(3, &[(0, 1), (0, 2)]);
    a = maintain_on_move(&a, &back, &attrs, &mut timers, &params);
    println!("back in range: roles {:?}", a.roles());
}
