//! Event-driven cluster maintenance: node arrival, members leaving their
//! cluster, heads departing or dying, and hand-over when a head's
//! probability drops below the floor.
//!
//! None of these operations re-cluster the whole network. Each one touches
//! only the cluster the event happened in.

use crate::error::{Error, Result};
use crate::mobility::{NeighborGraph, NodeId};

use super::{
    compute_weights, elect_min_weight, heads_of, members_in, ClusterAssignment, NodeAttrs,
    PaiwcaParams, Role,
};

/// Consecutive ticks each node has spent unaffiliated without hearing a head.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrphanTimers {
    ticks: Vec<u32>,
}

impl OrphanTimers {
    pub fn new(capacity: usize) -> Self {
        Self {
            ticks: vec![0; capacity],
        }
    }

    pub fn get(&self, id: NodeId) -> u32 {
        self.ticks.get(id).copied().unwrap_or(0)
    }

    fn reset(&mut self, id: NodeId) {
        if let Some(t) = self.ticks.get_mut(id) {
            *t = 0;
        }
    }

    fn bump(&mut self, id: NodeId) -> u32 {
        if id >= self.ticks.len() {
            self.ticks.resize(id + 1, 0);
        }
        self.ticks[id] += 1;
        self.ticks[id]
    }
}

fn has_room(roles: &[Role], head: NodeId, cap: Option<usize>) -> bool {
    match cap {
        None => true,
        Some(cap) => roles.iter().filter(|&&r| r == Role::Member(head)).count() < cap,
    }
}

/// The neighboring head with the highest chprob (ties to the lowest id) that
/// still has room.
fn strongest_head(
    roles: &[Role],
    g: &NeighborGraph,
    node: NodeId,
    attrs: &[NodeAttrs],
    cap: Option<usize>,
) -> Option<NodeId> {
    let mut best: Option<NodeId> = None;
    for &n in g.neighbors(node) {
        if !roles[n].is_head() || !has_room(roles, n, cap) {
            continue;
        }
        // neighbors are ascending, so a strict comparison keeps the lowest id on ties
        if best.is_none_or(|b| attrs[n].chprob > attrs[b].chprob) {
            best = Some(n);
        }
    }
    best
}

/// Joins the strongest neighboring head, or leaves the node unassigned.
fn rehome(
    roles: &mut [Role],
    g: &NeighborGraph,
    node: NodeId,
    attrs: &[NodeAttrs],
    cap: Option<usize>,
) -> bool {
    match strongest_head(roles, g, node, attrs, cap) {
        Some(h) => {
            roles[node] = Role::Member(h);
            true
        }
        None => {
            roles[node] = Role::Unassigned;
            false
        }
    }
}

/// Moves the members of `old` that are adjacent to `new_head` under it and
/// re-homes the rest.
fn transfer_members(
    roles: &mut [Role],
    g: &NeighborGraph,
    members: &[NodeId],
    new_head: NodeId,
    attrs: &[NodeAttrs],
    cap: Option<usize>,
) {
    for &m in members {
        if m == new_head {
            continue;
        }
        if g.has_edge(m, new_head) && has_room(roles, new_head, cap) {
            roles[m] = Role::Member(new_head);
        } else {
            rehome(roles, g, m, attrs, cap);
        }
    }
}

/// Places a newly arrived node without re-clustering the network.
///
/// An isolated node, or one that hears no head, forms its own cluster.
/// Otherwise it compares its chprob with the strongest neighboring head: if
/// strictly higher it takes over that cluster (the old head becomes its
/// member), else it joins as a member.
pub fn admit_new_node(
    assign: &ClusterAssignment,
    g: &NeighborGraph,
    new_id: NodeId,
    attrs: &[NodeAttrs],
    params: &PaiwcaParams,
) -> Result<ClusterAssignment> {
    if assign.role(new_id) != Role::Absent {
        return Err(Error::DuplicateNode(new_id));
    }
    if !g.is_present(new_id) {
        return Err(Error::UnknownNode(new_id));
    }
    let cap = params.max_cluster_size;
    let mut roles = assign.roles().to_vec();
    roles.resize(g.capacity(), Role::Absent);

    match strongest_head(&roles, g, new_id, attrs, None) {
        None => roles[new_id] = Role::Head,
        Some(target) if attrs[new_id].chprob > attrs[target].chprob => {
            let members = members_in(&roles, target);
            roles[new_id] = Role::Head;
            roles[target] = Role::Member(new_id);
            transfer_members(&mut roles, g, &members, new_id, attrs, cap);
        }
        Some(target) => {
            if has_room(&roles, target, cap) {
                roles[new_id] = Role::Member(target);
            } else if !rehome(&mut roles, g, new_id, attrs, cap) {
                roles[new_id] = Role::Head;
            }
        }
    }
    Ok(assign.succeed(roles, g))
}

/// Per-tick maintenance after the neighbor graph has been rebuilt.
///
/// 1. Nodes missing from the graph lose their role; nodes new to it start unassigned.
/// 2. A head that died, or whose members are all out of range, has departed.
///    Its former members first try to join a neighboring head; the rest are
///    re-clustered among themselves with the min-weight election.
/// 3. Any other member no longer adjacent to its head becomes unassigned.
/// 4. Every unassigned node joins the strongest neighboring head, or waits;
///    after more than `orphan_timeout` ticks alone it declares itself head.
pub fn maintain_on_move(
    assign: &ClusterAssignment,
    g: &NeighborGraph,
    attrs: &[NodeAttrs],
    timers: &mut OrphanTimers,
    params: &PaiwcaParams,
) -> ClusterAssignment {
    let cap = params.max_cluster_size;
    let previous = assign.roles();
    let mut roles = previous.to_vec();
    roles.resize(g.capacity(), Role::Absent);

    for (id, role) in roles.iter_mut().enumerate() {
        if !g.is_present(id) {
            *role = Role::Absent;
            timers.reset(id);
        } else if *role == Role::Absent {
            *role = Role::Unassigned;
        }
    }

    let mut weights: Option<Vec<f64>> = None;
    for head in heads_of(previous) {
        let former: Vec<NodeId> = members_in(previous, head)
            .into_iter()
            .filter(|&m| g.is_present(m))
            .collect();
        if former.is_empty() {
            continue;
        }
        let departed = !g.is_present(head) || former.iter().all(|&m| !g.has_edge(m, head));
        if !departed {
            continue;
        }
        for &m in &former {
            roles[m] = Role::Unassigned;
        }
        let mut stranded = Vec::new();
        for &m in &former {
            if !rehome(&mut roles, g, m, attrs, cap) {
                stranded.push(m);
            }
            timers.reset(m);
        }
        if !stranded.is_empty() {
            let w = weights.get_or_insert_with(|| compute_weights(attrs, &params.weights));
            elect_min_weight(&mut roles, g, w, &stranded, cap);
        }
    }

    for id in g.node_ids() {
        if let Role::Member(h) = roles[id] {
            if !roles[h].is_head() || !g.has_edge(id, h) {
                roles[id] = Role::Unassigned;
            }
        }
    }

    for id in g.node_ids() {
        if roles[id] != Role::Unassigned {
            timers.reset(id);
            continue;
        }
        if rehome(&mut roles, g, id, attrs, cap) {
            timers.reset(id);
        } else if timers.bump(id) > params.orphan_timeout {
            roles[id] = Role::Head;
            timers.reset(id);
        }
    }

    assign.succeed(roles, g)
}

/// Hands over every cluster whose head has fallen below `p_min`.
///
/// The failing head is not a candidate; the min-weight member takes over and
/// the old head joins it. Singleton clusters keep their head. When no head is
/// below the floor the input is returned unchanged.
pub fn reelect_if_below_threshold(
    assign: &ClusterAssignment,
    g: &NeighborGraph,
    attrs: &[NodeAttrs],
    params: &PaiwcaParams,
) -> ClusterAssignment {
    let p_min = params.chprob.p_min;
    let failing: Vec<NodeId> = assign
        .heads()
        .into_iter()
        .filter(|&h| attrs[h].chprob < p_min)
        .collect();
    if failing.is_empty() {
        return assign.clone();
    }

    let cap = params.max_cluster_size;
    let weights = compute_weights(attrs, &params.weights);
    let mut roles = assign.roles().to_vec();
    for head in failing {
        if !roles[head].is_head() {
            continue;
        }
        let members = members_in(&roles, head);
        let Some(&winner) = members
            .iter()
            .min_by(|&&a, &&b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)))
        else {
            continue;
        };
        roles[winner] = Role::Head;
        if g.has_edge(head, winner) {
            roles[head] = Role::Member(winner);
        } else if !rehome(&mut roles, g, head, attrs, cap) {
            roles[head] = Role::Unassigned;
        }
        transfer_members(&mut roles, g, &members, winner, attrs, cap);
    }
    assign.succeed(roles, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::{cluster_setup, validate_assignment};

    fn attrs(chprobs: &[f64]) -> Vec<NodeAttrs> {
        chprobs
            .iter()
            .map(|&c| NodeAttrs {
                chprob: c,
                ..NodeAttrs::default()
            })
            .collect()
    }

    fn present_except(n: usize, edges: &[(NodeId, NodeId)], absent: &[NodeId]) -> NeighborGraph {
        let present: Vec<bool> = (0..n).map(|i| !absent.contains(&i)).collect();
        NeighborGraph::from_edges_masked(&present, edges)
    }

    #[test]
    fn isolated_arrival_forms_own_cluster() {
        let before = NeighborGraph::from_edges(3, &[(0, 1)]);
        let a =
            ClusterAssignment::from_roles(vec![Role::Head, Role::Member(0), Role::Absent], &before);
        let g = NeighborGraph::from_edges(3, &[(0, 1)]);
        let next = admit_new_node(
            &a,
            &g,
            2,
            &attrs(&[0.4, 0.1, 0.9]),
            &PaiwcaParams::default(),
        )
        .unwrap();
        assert_eq!(next.role(2), Role::Head);
        assert_eq!(next.epoch(), 1);
    }

    #[test]
    fn stronger_arrival_replaces_head() {
        let g0 = NeighborGraph::from_edges(3, &[(0, 1)]);
        let a = ClusterAssignment::from_roles(vec![Role::Head, Role::Member(0), Role::Absent], &g0);
        let g = NeighborGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        let next = admit_new_node(
            &a,
            &g,
            2,
            &attrs(&[0.4, 0.1, 0.6]),
            &PaiwcaParams::default(),
        )
        .unwrap();
        assert_eq!(next.heads(), vec![2]);
        assert_eq!(next.role(0), Role::Member(2));
        assert_eq!(next.role(1), Role::Member(2));
        assert_eq!(next.epoch(), 1);
        assert_eq!(validate_assignment(&next, &g), Ok(()));
    }

    #[test]
    fn weaker_arrival_joins_as_member() {
        let g0 = NeighborGraph::from_edges(3, &[(0, 1)]);
        let a = ClusterAssignment::from_roles(vec![Role::Head, Role::Member(0), Role::Absent], &g0);
        let g = NeighborGraph::from_edges(3, &[(0, 1), (0, 2)]);
        let next = admit_new_node(
            &a,
            &g,
            2,
            &attrs(&[0.4, 0.1, 0.3]),
            &PaiwcaParams::default(),
        )
        .unwrap();
        assert_eq!(next.role(2), Role::Member(0));
        assert_eq!(next.heads(), a.heads());
        assert_eq!(next.epoch(), 0);
    }

    #[test]
    fn equal_chprob_keeps_incumbent() {
        let g0 = NeighborGraph::from_edges(2, &[]);
        let a = ClusterAssignment::from_roles(vec![Role::Head, Role::Absent], &g0);
        let g = NeighborGraph::from_edges(2, &[(0, 1)]);
        let next =
            admit_new_node(&a, &g, 1, &attrs(&[0.4, 0.4]), &PaiwcaParams::default()).unwrap();
        assert_eq!(next.role(1), Role::Member(0));
    }

    #[test]
    fn arrival_compares_against_strongest_neighbor_head() {
        // new node 3 hears heads 0 (0.2) and 1 (0.5)
        let g0 = NeighborGraph::from_edges(4, &[(1, 2)]);
        let a = ClusterAssignment::from_roles(
            vec![Role::Head, Role::Head, Role::Member(1), Role::Absent],
            &g0,
        );
        let g = NeighborGraph::from_edges(4, &[(1, 2), (0, 3), (1, 3)]);
        let next = admit_new_node(
            &a,
            &g,
            3,
            &attrs(&[0.2, 0.5, 0.1, 0.3]),
            &PaiwcaParams::default(),
        )
        .unwrap();
        assert_eq!(next.role(3), Role::Member(1));
    }

    #[test]
    fn replaced_head_members_out_of_reach_are_rehomed() {
        // head 0 with members 1, 2; newcomer 3 is adjacent to 0 and 1 only.
        let g0 = NeighborGraph::from_edges(4, &[(0, 1), (0, 2)]);
        let a = ClusterAssignment::from_roles(
            vec![Role::Head, Role::Member(0), Role::Member(0), Role::Absent],
            &g0,
        );
        let g = NeighborGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 3)]);
        let next = admit_new_node(
            &a,
            &g,
            3,
            &attrs(&[0.2, 0.1, 0.1, 0.9]),
            &PaiwcaParams::default(),
        )
        .unwrap();
        assert_eq!(next.role(1), Role::Member(3));
        assert_eq!(next.role(2), Role::Unassigned);
        assert_eq!(validate_assignment(&next, &g), Ok(()));
    }

    #[test]
    fn rejects_duplicate_arrival() {
        let g = NeighborGraph::from_edges(2, &[(0, 1)]);
        let a = ClusterAssignment::from_roles(vec![Role::Head, Role::Member(0)], &g);
        let err = admit_new_node(&a, &g, 1, &attrs(&[0.1, 0.2]), &PaiwcaParams::default());
        assert!(matches!(err, Err(Error::DuplicateNode(1))));
    }

    #[test]
    fn member_moves_to_other_head() {
        // heads 0 and 2, member 1 drifts from 0 into 2's range
        let g0 = NeighborGraph::from_edges(3, &[(0, 1)]);
        let a = ClusterAssignment::from_roles(vec![Role::Head, Role::Member(0), Role::Head], &g0);
        let g = NeighborGraph::from_edges(3, &[(1, 2)]);
        let mut timers = OrphanTimers::new(3);
        let next = maintain_on_move(
            &a,
            &g,
            &attrs(&[0.5, 0.1, 0.5]),
            &mut timers,
            &PaiwcaParams::default(),
        );
        assert_eq!(next.role(1), Role::Member(2));
        assert_eq!(next.heads(), vec![0, 2]);
        assert_eq!(next.epoch(), a.epoch());
    }

    #[test]
    fn orphan_self_declares_after_timeout() {
        let g0 = NeighborGraph::from_edges(3, &[(0, 1), (0, 2)]);
        let mut a =
            ClusterAssignment::from_roles(vec![Role::Head, Role::Member(0), Role::Member(0)], &g0);
        // 1 leaves; 2 keeps the head in range, so the head has not departed
        let g = NeighborGraph::from_edges(3, &[(0, 2)]);
        let params = PaiwcaParams::default();
        let at = attrs(&[0.5, 0.3, 0.3]);
        let mut timers = OrphanTimers::new(3);
        for tick in 1..=params.orphan_timeout {
            a = maintain_on_move(&a, &g, &at, &mut timers, &params);
            assert_eq!(a.role(1), Role::Unassigned, "tick {tick}");
            assert_eq!(timers.get(1), tick);
            assert_eq!(a.epoch(), 0);
        }
        a = maintain_on_move(&a, &g, &at, &mut timers, &params);
        assert_eq!(a.role(1), Role::Head);
        assert_eq!(a.epoch(), 1);
        assert_eq!(timers.get(1), 0);
    }

    #[test]
    fn dead_head_triggers_local_setup() {
        // head 2 with mutually connected members 0 and 1; 2 dies
        let g0 = NeighborGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        let a =
            ClusterAssignment::from_roles(vec![Role::Member(2), Role::Member(2), Role::Head], &g0);
        let g = present_except(3, &[(0, 1), (0, 2), (1, 2)], &[2]);
        let mut at = attrs(&[0.3, 0.3, 0.3]);
        at[1].tr = 0.0;
        at[0].tr = 10.0; // node 1 has the lower weight
        let mut timers = OrphanTimers::new(3);
        let next = maintain_on_move(&a, &g, &at, &mut timers, &PaiwcaParams::default());
        assert_eq!(next.role(2), Role::Absent);
        assert_eq!(next.heads(), vec![1]);
        assert_eq!(next.role(0), Role::Member(1));
        assert_eq!(next.epoch(), 1);
        assert_eq!(validate_assignment(&next, &g), Ok(()));
    }

    #[test]
    fn reelection_noop_when_all_above_floor() {
        let g = NeighborGraph::from_edges(3, &[(0, 1), (0, 2)]);
        let a = cluster_setup(&g, &attrs(&[0.9, 0.1, 0.1]), &PaiwcaParams::default());
        let next =
            reelect_if_below_threshold(&a, &g, &attrs(&[0.9, 0.1, 0.1]), &PaiwcaParams::default());
        assert_eq!(next, a);
    }

    #[test]
    fn reelection_picks_min_weight_member() {
        let g = NeighborGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        let a =
            ClusterAssignment::from_roles(vec![Role::Head, Role::Member(0), Role::Member(0)], &g);
        let params = PaiwcaParams {
            weights: crate::clustering::WeightParams {
                include_chprob_term: false,
                ..Default::default()
            },
            ..PaiwcaParams::default()
        };
        // weights 0.2*tr: member 1 -> 2, member 2 -> 5
        let mut at = attrs(&[1e-5, 0.3, 0.3]);
        at[1].tr = 10.0;
        at[2].tr = 25.0;
        let next = reelect_if_below_threshold(&a, &g, &at, &params);
        assert_eq!(next.heads(), vec![1]);
        assert_eq!(next.role(0), Role::Member(1));
        assert_eq!(next.role(2), Role::Member(1));
        assert_eq!(next.epoch(), 1);
    }

    #[test]
    fn reelection_exempts_singletons() {
        let g = NeighborGraph::from_edges(1, &[]);
        let a = ClusterAssignment::from_roles(vec![Role::Head], &g);
        let next = reelect_if_below_threshold(&a, &g, &attrs(&[0.0]), &PaiwcaParams::default());
        assert_eq!(next, a);
    }
}
