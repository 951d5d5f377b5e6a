//! Constant-bit-rate traffic forwarded over the cluster structure.
//!
//! Routing is hierarchical. A member that cannot reach the destination
//! directly hands the packet to its head. Heads, gateways and border nodes
//! (nodes with a neighbor in another cluster) form the backbone and forward
//! along breadth-first shortest paths within it. Each node forwards at most
//! `service_rate` packets per tick from a FIFO queue, so congested heads
//! build up queueing delay.

use std::collections::{HashMap, VecDeque};

use crate::clustering::{ClusterAssignment, Role};
use crate::error::{Error, Result};
use crate::mobility::{NeighborGraph, NodeId};

pub type Tick = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DropReason {
    QueueOverflow,
    /// No route toward the destination.
    Unreachable,
    /// The node holding the packet ran out of energy.
    NodeDied,
    /// Exceeded the hop limit (node count).
    HopLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacketState {
    InQueue(NodeId),
    Delivered(Tick),
    Dropped(DropReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub id: u64,
    pub src: NodeId,
    pub dst: NodeId,
    pub created_tick: Tick,
    pub hops: u32,
    pub state: PacketState,
    ready_tick: Tick,
}

impl Packet {
    /// Ticks from creation to delivery, if delivered.
    pub fn delay(&self) -> Option<Tick> {
        match self.state {
            PacketState::Delivered(t) => Some(t - self.created_tick),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConfig {
    /// Number of source nodes; `None` makes every initial node a source.
    pub source_count: Option<usize>,
    /// Packets per second per source.
    pub rate: f64,
    pub queue_capacity: usize,
    /// Ticks a packet waits at a node before it can be forwarded.
    pub per_hop_delay: Tick,
    /// Packets a node can forward per tick.
    pub service_rate: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            source_count: None,
            rate: 1.0,
            queue_capacity: 50,
            per_hop_delay: 1,
            service_rate: 20,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate > 0.0) || !self.rate.is_finite() {
            return Err(Error::param("traffic.rate", "must be positive and finite"));
        }
        if self.queue_capacity == 0 {
            return Err(Error::param("traffic.queue_capacity", "must be >= 1"));
        }
        if self.per_hop_delay == 0 {
            return Err(Error::param("traffic.per_hop_delay", "must be >= 1 tick"));
        }
        if self.service_rate == 0 {
            return Err(Error::param("traffic.service_rate", "must be >= 1"));
        }
        if self.source_count == Some(0) {
            return Err(Error::param("traffic.sources", "must be >= 1 or `all`"));
        }
        Ok(())
    }
}

/// Next-hop oracle for one tick's topology and clustering.
pub struct Router<'a> {
    assign: &'a ClusterAssignment,
    g: &'a NeighborGraph,
    backbone: Vec<bool>,
    to_dst: HashMap<NodeId, Vec<u32>>,
}

const UNREACHED: u32 = u32::MAX;

impl<'a> Router<'a> {
    pub fn new(assign: &'a ClusterAssignment, g: &'a NeighborGraph) -> Self {
        let mut backbone = vec![false; g.capacity()];
        for id in g.node_ids() {
            backbone[id] = match assign.role(id) {
                Role::Head | Role::Unassigned | Role::Absent => true,
                Role::Member(_) => {
                    let own = assign.cluster_of(id);
                    assign.is_gateway(id)
                        || g.neighbors(id).iter().any(|&n| assign.cluster_of(n) != own)
                }
            };
        }
        Self {
            assign,
            g,
            backbone,
            to_dst: HashMap::new(),
        }
    }

    pub fn is_backbone(&self, id: NodeId) -> bool {
        self.backbone.get(id).copied().unwrap_or(false)
    }

    /// Hop distances to `dst` over the backbone plus `dst` itself.
    fn distances(&mut self, dst: NodeId) -> &[u32] {
        let g = self.g;
        let backbone = &self.backbone;
        self.to_dst.entry(dst).or_insert_with(|| {
            let mut dist = vec![UNREACHED; g.capacity()];
            let mut queue = VecDeque::new();
            dist[dst] = 0;
            queue.push_back(dst);
            while let Some(u) = queue.pop_front() {
                for &v in g.neighbors(u) {
                    if backbone[v] && dist[v] == UNREACHED {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            dist
        })
    }

    pub fn next_hop(&mut self, at: NodeId, dst: NodeId) -> Option<NodeId> {
        let g = self.g;
        if !g.is_present(at) || !g.is_present(dst) || at == dst {
            return None;
        }
        if g.has_edge(at, dst) {
            return Some(dst);
        }
        let interior_head = match self.assign.role(at) {
            Role::Member(h) if !self.is_backbone(at) && g.has_edge(at, h) => Some(h),
            _ => None,
        };
        let dist = self.distances(dst);
        if let Some(h) = interior_head {
            return (dist[h] != UNREACHED).then_some(h);
        }
        let mut best: Option<NodeId> = None;
        for &n in g.neighbors(at) {
            if dist[n] != UNREACHED && best.is_none_or(|b| dist[n] < dist[b]) {
                best = Some(n);
            }
        }
        best
    }
}

/// Single-query convenience around [`Router`].
pub fn route_next_hop(
    assign: &ClusterAssignment,
    g: &NeighborGraph,
    at: NodeId,
    dst: NodeId,
) -> Option<NodeId> {
    Router::new(assign, g).next_hop(at, dst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub src: NodeId,
    pub dst: NodeId,
    credit: f64,
}

impl Flow {
    pub fn new(src: NodeId, dst: NodeId) -> Self {
        Self {
            src,
            dst,
            credit: 0.0,
        }
    }
}

/// Packets resolved during one traffic step.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrafficStep {
    pub generated: u64,
    pub delivered: Vec<Packet>,
    pub dropped: Vec<Packet>,
}

/// Queues, flows and running counters of one run.
#[derive(Debug, Clone)]
pub struct TrafficState {
    queues: Vec<VecDeque<Packet>>,
    flows: Vec<Flow>,
    next_id: u64,
    pub sent: u64,
    pub delivered: u64,
    pub dropped: u64,
    /// Packets transmitted / received per node during the last step.
    pub tx: Vec<u64>,
    pub rx: Vec<u64>,
}

impl TrafficState {
    pub fn new(capacity: usize, flows: Vec<Flow>) -> Self {
        Self {
            queues: vec![VecDeque::new(); capacity],
            flows,
            next_id: 0,
            sent: 0,
            delivered: 0,
            dropped: 0,
            tx: vec![0; capacity],
            rx: vec![0; capacity],
        }
    }

    pub fn flows(&self) -> &[Flow] {
        &self.flows
    }

    pub fn queue_len(&self, id: NodeId) -> usize {
        self.queues.get(id).map_or(0, VecDeque::len)
    }

    pub fn in_flight(&self) -> u64 {
        self.queues.iter().map(|q| q.len() as u64).sum()
    }

    /// Packets queued anywhere, in node order.
    pub fn queued(&self) -> impl Iterator<Item = &Packet> {
        self.queues.iter().flatten()
    }

    /// Injects a packet at `src` outside of any flow.
    pub fn inject(
        &mut self,
        src: NodeId,
        dst: NodeId,
        tick: Tick,
        flow: &FlowConfig,
    ) -> TrafficStep {
        let mut out = TrafficStep::default();
        self.generate(src, dst, tick, flow, &mut out);
        out
    }

    fn generate(
        &mut self,
        src: NodeId,
        dst: NodeId,
        tick: Tick,
        flow: &FlowConfig,
        out: &mut TrafficStep,
    ) {
        let mut p = Packet {
            id: self.next_id,
            src,
            dst,
            created_tick: tick,
            hops: 0,
            state: PacketState::InQueue(src),
            ready_tick: tick + flow.per_hop_delay,
        };
        self.next_id += 1;
        self.sent += 1;
        out.generated += 1;
        if src == dst {
            p.state = PacketState::Delivered(tick);
            self.delivered += 1;
            out.delivered.push(p);
        } else if self.queues[src].len() >= flow.queue_capacity {
            p.state = PacketState::Dropped(DropReason::QueueOverflow);
            self.dropped += 1;
            out.dropped.push(p);
        } else {
            self.queues[src].push_back(p);
        }
    }

    fn drop_packet(&mut self, mut p: Packet, reason: DropReason, out: &mut TrafficStep) {
        p.state = PacketState::Dropped(reason);
        self.dropped += 1;
        out.dropped.push(p);
    }

    /// Empties the queue of a node that left the network.
    pub fn flush_node(&mut self, id: NodeId) -> TrafficStep {
        let mut out = TrafficStep::default();
        let drained: Vec<Packet> = self.queues[id].drain(..).collect();
        for p in drained {
            self.drop_packet(p, DropReason::NodeDied, &mut out);
        }
        out
    }
}

/// One tick of traffic: generation at every live source, then forwarding at
/// every node in ascending id order.
pub fn step_traffic(
    state: &mut TrafficState,
    assign: &ClusterAssignment,
    g: &NeighborGraph,
    flow: &FlowConfig,
    tick: Tick,
    dt: f64,
) -> TrafficStep {
    let mut out = TrafficStep::default();
    state.tx.iter_mut().for_each(|c| *c = 0);
    state.rx.iter_mut().for_each(|c| *c = 0);
    if state.queues.len() < g.capacity() {
        state.queues.resize(g.capacity(), VecDeque::new());
        state.tx.resize(g.capacity(), 0);
        state.rx.resize(g.capacity(), 0);
    }

    for id in 0..state.queues.len() {
        if !g.is_present(id) && !state.queues[id].is_empty() {
            let dead = state.flush_node(id);
            out.dropped.extend(dead.dropped);
        }
    }

    for i in 0..state.flows.len() {
        let (src, dst) = (state.flows[i].src, state.flows[i].dst);
        if !g.is_present(src) {
            continue;
        }
        state.flows[i].credit += flow.rate * dt;
        while state.flows[i].credit >= 1.0 {
            state.flows[i].credit -= 1.0;
            state.generate(src, dst, tick, flow, &mut out);
        }
    }

    let hop_limit = g.node_count() as u32;
    let mut router = Router::new(assign, g);
    for at in g.node_ids() {
        let mut served = 0;
        while served < flow.service_rate {
            match state.queues[at].front() {
                Some(p) if p.ready_tick <= tick => {}
                _ => break,
            }
            let mut p = state.queues[at].pop_front().expect("front checked");
            served += 1;
            let Some(next) = router.next_hop(at, p.dst) else {
                state.drop_packet(p, DropReason::Unreachable, &mut out);
                continue;
            };
            if p.hops + 1 > hop_limit {
                state.drop_packet(p, DropReason::HopLimit, &mut out);
                continue;
            }
            p.hops += 1;
            state.tx[at] += 1;
            state.rx[next] += 1;
            if next == p.dst {
                p.state = PacketState::Delivered(tick);
                state.delivered += 1;
                out.delivered.push(p);
            } else if state.queues[next].len() >= flow.queue_capacity {
                state.drop_packet(p, DropReason::QueueOverflow, &mut out);
            } else {
                p.state = PacketState::InQueue(next);
                p.ready_tick = tick + flow.per_hop_delay;
                state.queues[next].push_back(p);
            }
        }
    }
    out
}

/// Delivered over sent; 1 when nothing was sent.
pub fn compute_pdr(delivered: u64, sent: u64) -> f64 {
    if sent == 0 {
        1.0
    } else {
        delivered as f64 / sent as f64
    }
}

/// Mean delay in ticks over delivered packets only; 0 for none.
pub fn compute_delay(delivered: &[Packet]) -> f64 {
    let delays: Vec<Tick> = delivered.iter().filter_map(Packet::delay).collect();
    if delays.is_empty() {
        0.0
    } else {
        delays.iter().sum::<Tick>() as f64 / delays.len() as f64
    }
}
