//! Comparison cluster-head elections: highest degree, lowest id, weighted
//! clustering (WCA) and greedy maximal weighted independent set.
//!
//! All four are one-shot elections over a snapshot of the neighbor graph.
//! In a running simulation they are simply re-run whenever the graph changes.

use crate::clustering::{ClusterAssignment, Role};
use crate::error::{Error, Result};
use crate::mobility::{NeighborGraph, NodeId, Position};

fn fresh_roles(g: &NeighborGraph) -> Vec<Role> {
    let mut roles = vec![Role::Absent; g.capacity()];
    for id in g.node_ids() {
        roles[id] = Role::Unassigned;
    }
    roles
}

/// Greedy election by largest degree among still-uncovered nodes.
pub fn highest_degree(g: &NeighborGraph) -> ClusterAssignment {
    let mut roles = fresh_roles(g);
    loop {
        let uncovered_degree = |id: NodeId| {
            g.neighbors(id)
                .iter()
                .filter(|&&n| roles[n] == Role::Unassigned)
                .count()
        };
        // max_by_key keeps the last maximum, so walk ids in reverse
        let pick = g
            .node_ids()
            .filter(|&id| roles[id] == Role::Unassigned)
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .max_by_key(|&id| uncovered_degree(id));
        let Some(head) = pick else { break };
        roles[head] = Role::Head;
        for &n in g.neighbors(head) {
            if roles[n] == Role::Unassigned {
                roles[n] = Role::Member(head);
            }
        }
    }
    ClusterAssignment::from_roles(roles, g)
}

/// Lowest-id clustering: visiting nodes in ascending id, a node that hears
/// no already-elected head becomes one; every other node joins the lowest-id
/// head it hears. Nodes hearing two or more heads are flagged as gateways.
pub fn lowest_id(g: &NeighborGraph) -> ClusterAssignment {
    let mut roles = fresh_roles(g);
    for id in g.node_ids() {
        let lowest_head = g
            .neighbors(id)
            .iter()
            .copied()
            .find(|&n| roles[n].is_head());
        roles[id] = match lowest_head {
            Some(h) => Role::Member(h),
            None => Role::Head,
        };
    }
    ClusterAssignment::from_roles(roles, g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WcaParams {
    /// Degree-difference coefficient.
    pub w1: f64,
    /// Neighbor-distance-sum coefficient.
    pub w2: f64,
    /// Mobility coefficient.
    pub w3: f64,
    /// Consumed-energy coefficient.
    pub w4: f64,
    pub ideal_degree: usize,
    /// Use the raw degree instead of `|degree - ideal_degree|`.
    pub raw_degree: bool,
}

impl Default for WcaParams {
    fn default() -> Self {
        Self {
            w1: 0.2,
            w2: 0.2,
            w3: 0.05,
            w4: 0.05,
            ideal_degree: 5,
            raw_degree: false,
        }
    }
}

impl WcaParams {
    pub fn validate(&self) -> Result<()> {
        for (name, w) in [
            ("wca.w1", self.w1),
            ("wca.w2", self.w2),
            ("wca.w3", self.w3),
            ("wca.w4", self.w4),
        ] {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::param(name, "must be finite and >= 0"));
            }
        }
        Ok(())
    }
}

/// Per-node inputs of the WCA weight.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WcaInputs {
    pub degree: usize,
    /// Sum of distances to all neighbors, in meters.
    pub dist_sum: f64,
    pub mv: f64,
    pub pv: f64,
}

/// Degree and distance sums from the full graph; `mv`/`pv` are copied from the slices.
pub fn wca_inputs(
    g: &NeighborGraph,
    positions: &[Position],
    mv: &[f64],
    pv: &[f64],
) -> Vec<WcaInputs> {
    (0..g.capacity())
        .map(|id| {
            let neighbors = g.neighbors(id);
            WcaInputs {
                degree: neighbors.len(),
                dist_sum: neighbors
                    .iter()
                    .map(|&n| positions[id].distance(&positions[n]))
                    .sum(),
                mv: mv[id],
                pv: pv[id],
            }
        })
        .collect()
}

pub fn wca_weight(input: &WcaInputs, p: &WcaParams) -> f64 {
    let delta = if p.raw_degree {
        input.degree as f64
    } else {
        input.degree.abs_diff(p.ideal_degree) as f64
    };
    p.w1 * delta + p.w2 * input.dist_sum + p.w3 * input.mv + p.w4 * input.pv
}

/// Greedy min-weight election with WCA weights.
pub fn wca(g: &NeighborGraph, inputs: &[WcaInputs], p: &WcaParams) -> ClusterAssignment {
    let weights: Vec<f64> = inputs.iter().map(|i| wca_weight(i, p)).collect();
    let mut roles = fresh_roles(g);
    let mut order: Vec<NodeId> = g.node_ids().collect();
    order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
    for head in order {
        if roles[head] != Role::Unassigned {
            continue;
        }
        roles[head] = Role::Head;
        for &n in g.neighbors(head) {
            if roles[n] == Role::Unassigned {
                roles[n] = Role::Member(head);
            }
        }
    }
    ClusterAssignment::from_roles(roles, g)
}

/// Greedy maximal weighted independent set: heaviest available node first
/// (ties to the lowest id). Each ordinary node joins its heaviest
/// neighboring head.
pub fn mwis(g: &NeighborGraph, weights: &[f64]) -> ClusterAssignment {
    let mut order: Vec<NodeId> = g.node_ids().collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let mut roles = fresh_roles(g);
    let mut blocked = vec![false; g.capacity()];
    for v in order {
        if blocked[v] {
            continue;
        }
        roles[v] = Role::Head;
        blocked[v] = true;
        for &n in g.neighbors(v) {
            blocked[n] = true;
        }
    }
    for id in g.node_ids() {
        if roles[id].is_head() {
            continue;
        }
        let mut best: Option<NodeId> = None;
        for &n in g.neighbors(id) {
            if roles[n].is_head() && best.is_none_or(|b| weights[n] > weights[b]) {
                best = Some(n);
            }
        }
        // maximality guarantees a head neighbor
        roles[id] = Role::Member(best.expect("greedy MWIS left a node undominated"));
    }
    ClusterAssignment::from_roles(roles, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::validate_assignment;

    fn path(n: usize) -> NeighborGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        NeighborGraph::from_edges(n, &edges)
    }

    #[test]
    fn highest_degree_star() {
        let g = NeighborGraph::from_edges(5, &[(2, 0), (2, 1), (2, 3), (2, 4)]);
        let a = highest_degree(&g);
        assert_eq!(a.heads(), vec![2]);
        assert_eq!(a.members_of(2), vec![0, 1, 3, 4]);
    }

    #[test]
    fn highest_degree_path_trace() {
        let a = highest_degree(&path(5));
        assert_eq!(a.heads(), vec![1, 3]);
        assert_eq!(a.role(0), Role::Member(1));
        assert_eq!(a.role(2), Role::Member(1));
        assert_eq!(a.role(4), Role::Member(3));
    }

    #[test]
    fn highest_degree_isolated() {
        let g = NeighborGraph::from_edges(3, &[]);
        assert_eq!(highest_degree(&g).heads(), vec![0, 1, 2]);
    }

    #[test]
    fn lowest_id_triangle() {
        let g = NeighborGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let a = lowest_id(&g);
        assert_eq!(a.heads(), vec![0]);
        assert!((0..3).all(|i| !a.is_gateway(i)));
    }

    #[test]
    fn lowest_id_path_2_1_3() {
        // ids relabelled to 0-based: 1 -> 0, 2 -> 1, 3 -> 2; path is 1-0-2
        let g = NeighborGraph::from_edges(3, &[(1, 0), (0, 2)]);
        let a = lowest_id(&g);
        assert_eq!(a.roles(), &[Role::Head, Role::Member(0), Role::Member(0)]);
    }

    #[test]
    fn lowest_id_gateway_bridge() {
        // cliques {1,2}, {3,4}; node 5 adjacent to 1 and 3 (0-based: minus one)
        let g = NeighborGraph::from_edges(5, &[(0, 1), (2, 3), (4, 0), (4, 2)]);
        let a = lowest_id(&g);
        assert_eq!(a.heads(), vec![0, 2]);
        assert!(a.is_gateway(4));
        assert_eq!(a.role(4), Role::Member(0));
    }

    #[test]
    fn wca_isolated_pair() {
        let g = NeighborGraph::from_edges(2, &[]);
        let inputs = vec![WcaInputs::default(); 2];
        assert_eq!(wca(&g, &inputs, &WcaParams::default()).heads(), vec![0, 1]);
    }

    #[test]
    fn wca_path_hand_trace() {
        // a(0,0) - b(10,0) - c(20,0), ranges 15, ideal degree 2, mv = pv = 0.
        // W(a) = 0.2*|1-2| + 0.2*10 = 2.2, W(b) = 0.2*0 + 0.2*20 = 4.0, W(c) = 2.2.
        let pos = [
            Position::new(0.0, 0.0),
            Position::new(10.0, 0.0),
            Position::new(20.0, 0.0),
        ];
        let g = crate::mobility::build_neighbor_graph(&pos, &[15.0; 3]);
        let p = WcaParams {
            ideal_degree: 2,
            ..WcaParams::default()
        };
        let inputs = wca_inputs(&g, &pos, &[0.0; 3], &[0.0; 3]);
        let w: Vec<f64> = inputs.iter().map(|i| wca_weight(i, &p)).collect();
        assert!((w[0] - 2.2).abs() < 1e-12 && (w[1] - 4.0).abs() < 1e-12);
        let a = wca(&g, &inputs, &p);
        assert_eq!(a.heads(), vec![0, 2]);
        assert_eq!(a.role(1), Role::Member(0));
    }

    #[test]
    fn wca_scale_invariance() {
        let pos: Vec<Position> = (0..8)
            .map(|i| Position::new((i * 37 % 100) as f64, (i * 61 % 100) as f64))
            .collect();
        let g = crate::mobility::build_neighbor_graph(&pos, &[45.0; 8]);
        let mv: Vec<f64> = (0..8).map(|i| i as f64 * 1.3).collect();
        let pv: Vec<f64> = (0..8).map(|i| (8 - i) as f64 * 0.7).collect();
        let inputs = wca_inputs(&g, &pos, &mv, &pv);
        let p = WcaParams::default();
        let scaled = WcaParams {
            w1: p.w1 * 3.5,
            w2: p.w2 * 3.5,
            w3: p.w3 * 3.5,
            w4: p.w4 * 3.5,
            ..p
        };
        assert_eq!(
            wca(&g, &inputs, &p).heads(),
            wca(&g, &inputs, &scaled).heads()
        );
    }

    #[test]
    fn mwis_path_middle_heavy() {
        let a = mwis(&path(3), &[1.0, 5.0, 1.0]);
        assert_eq!(a.heads(), vec![1]);
        assert_eq!(a.members_of(1), vec![0, 2]);
    }

    #[test]
    fn mwis_path_ends_heavy() {
        let a = mwis(&path(3), &[5.0, 1.0, 5.0]);
        assert_eq!(a.heads(), vec![0, 2]);
        assert_eq!(a.role(1), Role::Member(0));
    }

    #[test]
    fn mwis_single_node() {
        let g = NeighborGraph::from_edges(1, &[]);
        assert_eq!(mwis(&g, &[0.3]).heads(), vec![0]);
    }

    #[test]
    fn all_baselines_produce_valid_clusterings() {
        let g = NeighborGraph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (2, 4)]);
        let pos: Vec<Position> = (0..7).map(|i| Position::new(i as f64, 0.0)).collect();
        let inputs = wca_inputs(&g, &pos, &[0.0; 7], &[0.0; 7]);
        for a in [
            highest_degree(&g),
            lowest_id(&g),
            wca(&g, &inputs, &WcaParams::default()),
            mwis(&g, &[3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0]),
        ] {
            assert_eq!(validate_assignment(&a, &g), Ok(()));
            // every member adjacent to its head means radius <= 1
            for id in 0..7 {
                if let Role::Member(h) = a.role(id) {
                    assert!(g.has_edge(id, h));
                }
            }
        }
    }
}
