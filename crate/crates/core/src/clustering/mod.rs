//! Probability-gated weighted clustering.
//!
//! Every node carries a weight computed from its own attributes only
//! (range, transmission rate, mobility, consumed energy, cluster-head
//! probability), so the weights are known before any election starts. The
//! setup phase repeatedly elects the lowest-weight unassigned node and lets
//! it claim its unassigned neighbors. After setup, elections only happen on
//! named events; see [`maintenance`].

pub mod maintenance;

use std::fmt;

use crate::energy::{DrainRole, EnergyState};
use crate::error::{Error, Result};
use crate::mobility::{NeighborGraph, NodeId};

pub use maintenance::{admit_new_node, maintain_on_move, reelect_if_below_threshold, OrphanTimers};

/// Divisors applied to the weight terms when `normalize_terms` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermScale {
    pub tr: f64,
    pub tx: f64,
    pub mv: f64,
    pub pv: f64,
}

impl Default for TermScale {
    fn default() -> Self {
        Self {
            tr: 200.0,
            tx: 0.02,
            mv: 100.0,
            pv: 80.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    /// Transmission range coefficient.
    pub w1: f64,
    /// Transmission rate coefficient.
    pub w2: f64,
    /// Mobility coefficient.
    pub w3: f64,
    /// Consumed-energy coefficient.
    pub w4: f64,
    /// Subtract the node's cluster-head probability from the weighted sum.
    pub include_chprob_term: bool,
    /// Divide each raw term by the matching entry of `scale`.
    pub normalize_terms: bool,
    pub scale: TermScale,
}

impl Default for WeightParams {
    fn default() -> Self {
        Self {
            w1: 0.2,
            w2: 0.2,
            w3: 0.05,
            w4: 0.05,
            include_chprob_term: true,
            normalize_terms: false,
            scale: TermScale::default(),
        }
    }
}

impl WeightParams {
    pub fn validate(&self) -> Result<()> {
        for (name, w) in [
            ("weights.w1", self.w1),
            ("weights.w2", self.w2),
            ("weights.w3", self.w3),
            ("weights.w4", self.w4),
        ] {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::param(name, "must be finite and >= 0"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChprobParams {
    /// Base probability scaled by the residual charge fraction.
    pub c_prob: f64,
    /// Floor of the probability; a head below it must hand over.
    pub p_min: f64,
    /// Range normalizer in meters.
    pub tr_max: f64,
    /// Add `tr / tr_max` instead of the raw range in meters.
    pub normalize_range: bool,
}

impl Default for ChprobParams {
    fn default() -> Self {
        Self {
            c_prob: 0.05,
            p_min: 1e-4,
            tr_max: 200.0,
            normalize_range: true,
        }
    }
}

impl ChprobParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_min > 0.0) {
            return Err(Error::param("chprob.p_min", "must be > 0"));
        }
        if !(self.c_prob > self.p_min && self.c_prob <= 1.0) {
            return Err(Error::param(
                "chprob.c_prob",
                "must satisfy p_min < c_prob <= 1",
            ));
        }
        if !(self.tr_max > 0.0) || !self.tr_max.is_finite() {
            return Err(Error::param("chprob.tr_max", "must be positive and finite"));
        }
        Ok(())
    }
}

/// Everything the clustering operations need besides the graph and node attributes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaiwcaParams {
    pub weights: WeightParams,
    pub chprob: ChprobParams,
    /// Ticks an out-of-range member waits without hearing any head before
    /// declaring itself a head.
    pub orphan_timeout: u32,
    /// Optional cap on members per cluster. `None` disables it.
    pub max_cluster_size: Option<usize>,
}

impl Default for PaiwcaParams {
    fn default() -> Self {
        Self {
            weights: WeightParams::default(),
            chprob: ChprobParams::default(),
            orphan_timeout: 5,
            max_cluster_size: None,
        }
    }
}

impl PaiwcaParams {
    pub fn validate(&self) -> Result<()> {
        self.weights.validate()?;
        self.chprob.validate()?;
        if self.max_cluster_size == Some(0) {
            return Err(Error::param("cluster.max_size", "must be >= 1 when set"));
        }
        Ok(())
    }
}

/// Per-node inputs of the weight formula.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NodeAttrs {
    /// Transmission range in meters.
    pub tr: f64,
    /// Transmission rate in watts.
    pub tx: f64,
    /// Average speed in m/s.
    pub mv: f64,
    /// Consumed energy in joules.
    pub pv: f64,
    pub chprob: f64,
}

/// Cluster-head probability: `c_prob * (e_residual / e_max) + tr / tr_max`,
/// floored at `p_min`.
pub fn compute_chprob(e: &EnergyState, tr: f64, p: &ChprobParams) -> Result<f64> {
    if tr > p.tr_max {
        return Err(Error::RangeAboveMax {
            range: tr,
            tr_max: p.tr_max,
        });
    }
    let range_term = if p.normalize_range { tr / p.tr_max } else { tr };
    Ok((p.c_prob * e.fraction() + range_term).max(p.p_min))
}

/// Node weight; lower is a better cluster-head candidate.
pub fn compute_weight(a: &NodeAttrs, w: &WeightParams) -> f64 {
    let scaled = |value: f64, scale: f64| {
        if w.normalize_terms && scale > 0.0 {
            value / scale
        } else {
            value
        }
    };
    let sum = w.w1 * scaled(a.tr, w.scale.tr)
        + w.w2 * scaled(a.tx, w.scale.tx)
        + w.w3 * scaled(a.mv, w.scale.mv)
        + w.w4 * scaled(a.pv, w.scale.pv);
    if w.include_chprob_term {
        sum - a.chprob
    } else {
        sum
    }
}

pub fn compute_weights(attrs: &[NodeAttrs], w: &WeightParams) -> Vec<f64> {
    attrs.iter().map(|a| compute_weight(a, w)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Role {
    /// Not in the network (not arrived yet, or dead).
    #[default]
    Absent,
    Unassigned,
    Head,
    Member(NodeId),
}

impl Role {
    pub fn is_head(self) -> bool {
        matches!(self, Role::Head)
    }

    pub fn drain_role(self) -> DrainRole {
        match self {
            Role::Head => DrainRole::ClusterHead,
            Role::Member(_) => DrainRole::Member,
            Role::Absent | Role::Unassigned => DrainRole::Unassigned,
        }
    }
}

/// A partition of the present nodes into clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    roles: Vec<Role>,
    gateway: Vec<bool>,
    epoch: u64,
}

impl ClusterAssignment {
    pub fn new(capacity: usize) -> Self {
        Self {
            roles: vec![Role::Absent; capacity],
            gateway: vec![false; capacity],
            epoch: 0,
        }
    }

    /// Builds an assignment from explicit roles, computing gateway flags from `g`.
    pub fn from_roles(roles: Vec<Role>, g: &NeighborGraph) -> Self {
        let mut a = Self {
            gateway: vec![false; roles.len()],
            roles,
            epoch: 0,
        };
        a.refresh_gateways(g);
        a
    }

    pub fn capacity(&self) -> usize {
        self.roles.len()
    }

    pub fn role(&self, id: NodeId) -> Role {
        self.roles.get(id).copied().unwrap_or(Role::Absent)
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    /// Number of dominant-set changes this assignment has been through.
    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn with_epoch(mut self, epoch: u64) -> Self {
        self.epoch = epoch;
        self
    }

    pub fn is_gateway(&self, id: NodeId) -> bool {
        self.gateway.get(id).copied().unwrap_or(false)
    }

    /// The dominant set, ascending.
    pub fn heads(&self) -> Vec<NodeId> {
        self.roles
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.is_head().then_some(i))
            .collect()
    }

    pub fn cluster_count(&self) -> usize {
        self.roles.iter().filter(|r| r.is_head()).count()
    }

    pub fn members_of(&self, head: NodeId) -> Vec<NodeId> {
        members_in(&self.roles, head)
    }

    /// The head of the cluster `id` belongs to (itself for a head).
    pub fn cluster_of(&self, id: NodeId) -> Option<NodeId> {
        match self.role(id) {
            Role::Head => Some(id),
            Role::Member(h) => Some(h),
            Role::Absent | Role::Unassigned => None,
        }
    }

    /// Flags every non-head node that hears two or more heads.
    pub fn refresh_gateways(&mut self, g: &NeighborGraph) {
        self.gateway.clear();
        self.gateway.resize(self.roles.len(), false);
        for id in g.node_ids().filter(|&id| id < self.roles.len()) {
            if self.roles[id].is_head() {
                continue;
            }
            let heard = g
                .neighbors(id)
                .iter()
                .filter(|&&n| self.role(n).is_head())
                .count();
            self.gateway[id] = heard >= 2;
        }
    }

    /// Replaces the roles, recomputes gateways and bumps the epoch if the
    /// dominant set changed.
    pub(crate) fn succeed(&self, roles: Vec<Role>, g: &NeighborGraph) -> Self {
        let changed = heads_of(&roles) != self.heads();
        let mut next = Self {
            gateway: Vec::new(),
            roles,
            epoch: self.epoch + u64::from(changed),
        };
        next.refresh_gateways(g);
        next
    }
}

pub(crate) fn heads_of(roles: &[Role]) -> Vec<NodeId> {
    roles
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.is_head().then_some(i))
        .collect()
}

pub(crate) fn members_in(roles: &[Role], head: NodeId) -> Vec<NodeId> {
    roles
        .iter()
        .enumerate()
        .filter_map(|(i, r)| (*r == Role::Member(head)).then_some(i))
        .collect()
}

/// Greedy min-weight election over `candidates` (which must all be
/// `Unassigned`). Each elected head claims its unassigned neighbors among the
/// candidates; ties go to the lowest id.
pub(crate) fn elect_min_weight(
    roles: &mut [Role],
    g: &NeighborGraph,
    weights: &[f64],
    candidates: &[NodeId],
    max_cluster_size: Option<usize>,
) {
    let mut pool = vec![false; roles.len()];
    for &c in candidates {
        pool[c] = true;
    }
    let mut order = candidates.to_vec();
    order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
    for head in order {
        if roles[head] != Role::Unassigned {
            continue;
        }
        roles[head] = Role::Head;
        let mut claimed = 0;
        for &n in g.neighbors(head) {
            if max_cluster_size.is_some_and(|cap| claimed >= cap) {
                break;
            }
            if pool[n] && roles[n] == Role::Unassigned {
                roles[n] = Role::Member(head);
                claimed += 1;
            }
        }
    }
}

/// Initial clustering of every present node by ascending weight.
pub fn cluster_setup(
    g: &NeighborGraph,
    attrs: &[NodeAttrs],
    params: &PaiwcaParams,
) -> ClusterAssignment {
    let weights = compute_weights(attrs, &params.weights);
    let mut roles = vec![Role::Absent; g.capacity()];
    let present: Vec<NodeId> = g.node_ids().collect();
    for &id in &present {
        roles[id] = Role::Unassigned;
    }
    elect_min_weight(&mut roles, g, &weights, &present, params.max_cluster_size);
    ClusterAssignment::from_roles(roles, g)
}

/// A broken clustering invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A node in the graph has no role.
    MissingRole(NodeId),
    /// A node outside the graph still holds a role.
    GhostRole(NodeId),
    /// A member points at a node that is not a head.
    HeadlessMember {
        member: NodeId,
        head: NodeId,
    },
    /// A member is not adjacent to its head.
    DetachedMember {
        member: NodeId,
        head: NodeId,
    },
    SizeMismatch {
        graph: usize,
        assignment: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingRole(n) => write!(f, "node {n} is present but has no role"),
            Violation::GhostRole(n) => write!(f, "node {n} is absent but holds a role"),
            Violation::HeadlessMember { member, head } => {
                write!(f, "member {member} points at {head}, which is not a head")
            }
            Violation::DetachedMember { member, head } => {
                write!(f, "member {member} is not adjacent to its head {head}")
            }
            Violation::SizeMismatch { graph, assignment } => {
                write!(
                    f,
                    "graph capacity {graph} differs from assignment capacity {assignment}"
                )
            }
        }
    }
}

/// Checks the valid-clustering invariant against the current graph: every
/// present node has exactly one role, and every member's head exists, is a
/// head and is adjacent to it.
pub fn validate_assignment(a: &ClusterAssignment, g: &NeighborGraph) -> Result<(), Violation> {
    if a.capacity() != g.capacity() {
        return Err(Violation::SizeMismatch {
            graph: g.capacity(),
            assignment: a.capacity(),
        });
    }
    for id in 0..a.capacity() {
        let role = a.role(id);
        if !g.is_present(id) {
            if role != Role::Absent {
                return Err(Violation::GhostRole(id));
            }
            continue;
        }
        match role {
            Role::Absent => return Err(Violation::MissingRole(id)),
            Role::Member(head) => {
                if !a.role(head).is_head() {
                    return Err(Violation::HeadlessMember { member: id, head });
                }
                if !g.has_edge(id, head) {
                    return Err(Violation::DetachedMember { member: id, head });
                }
            }
            Role::Head | Role::Unassigned => {}
        }
    }
    Ok(())
}
