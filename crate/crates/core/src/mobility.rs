//! Random-waypoint movement and geometric neighbor discovery.
//!
//! Nodes travel in straight lines toward a waypoint drawn uniformly in the
//! area, at a speed drawn uniformly in `[speed.min, speed.max]`, then rest
//! for the configured pause before drawing the next leg. Links follow a disk
//! model: two nodes hear each other when their distance is within range.

use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};

/// Node identifiers are dense indices into per-node state vectors.
pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Rectangular simulation area anchored at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

impl Area {
    pub const fn new(width: f64, height: f64) -> Self {
        Self { width, height }
    }

    pub fn contains(&self, p: &Position) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    pub fn clamp(&self, p: Position) -> Position {
        Position::new(p.x.clamp(0.0, self.width), p.y.clamp(0.0, self.height))
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Position {
        Position::new(
            rng.gen_range(0.0..=self.width),
            rng.gen_range(0.0..=self.height),
        )
    }
}

impl Default for Area {
    fn default() -> Self {
        Self::new(500.0, 500.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedRange {
    pub min: f64,
    pub max: f64,
}

impl SpeedRange {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }
}

/// Parameters of the random-waypoint process shared by every node of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwpParams {
    pub area: Area,
    pub speed: SpeedRange,
    /// Rest time at each waypoint in seconds. `f64::INFINITY` freezes nodes.
    pub pause: f64,
}

impl RwpParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.area.width > 0.0 && self.area.height > 0.0) {
            return Err(Error::param("area", "width and height must be positive"));
        }
        if !(self.speed.min > 0.0) {
            return Err(Error::param("speed.min", "must be strictly positive"));
        }
        if !(self.speed.max >= self.speed.min) || !self.speed.max.is_finite() {
            return Err(Error::param("speed.max", "must be finite and >= speed.min"));
        }
        if !(self.pause >= 0.0) {
            return Err(Error::param("pause", "must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub position: Position,
    pub waypoint: Position,
    pub speed: f64,
    pub pause_remaining: f64,
    /// Cumulative path length in meters.
    pub distance_traveled: f64,
    /// Cumulative simulated time in seconds.
    pub elapsed: f64,
}

impl Kinematics {
    /// A node resting at `position` for `pause` seconds before its first leg.
    pub fn at_rest(position: Position, pause: f64) -> Self {
        Self {
            position,
            waypoint: position,
            speed: 0.0,
            pause_remaining: pause,
            distance_traveled: 0.0,
            elapsed: 0.0,
        }
    }

    /// A node already travelling toward `waypoint`.
    pub fn moving(position: Position, waypoint: Position, speed: f64) -> Self {
        Self {
            position,
            waypoint,
            speed,
            pause_remaining: 0.0,
            distance_traveled: 0.0,
            elapsed: 0.0,
        }
    }

    pub fn at_waypoint(&self) -> bool {
        self.position == self.waypoint
    }
}

// Upper bound on legs started within a single step; only reachable with
// zero pause and degenerate (zero-length) legs.
const MAX_LEGS_PER_STEP: usize = 64;

/// Advances one node by `dt` seconds of random-waypoint motion.
pub fn rwp_step<R: Rng + ?Sized>(
    k: &Kinematics,
    dt: f64,
    params: &RwpParams,
    rng: &mut R,
) -> Result<Kinematics> {
    if !(dt > 0.0) {
        return Err(Error::param("dt", "must be strictly positive"));
    }
    if !(params.speed.min > 0.0) {
        return Err(Error::param("speed.min", "must be strictly positive"));
    }

    let mut next = *k;
    let mut budget = dt;
    let mut legs = 0;
    while budget > 0.0 {
        if next.at_waypoint() {
            if next.pause_remaining > 0.0 {
                let rest = next.pause_remaining.min(budget);
                next.pause_remaining -= rest;
                budget -= rest;
                continue;
            }
            if legs == MAX_LEGS_PER_STEP {
                break;
            }
            legs += 1;
            next.waypoint = params.area.random_point(rng);
            next.speed = rng.gen_range(params.speed.min..=params.speed.max);
            next.pause_remaining = 0.0;
            continue;
        }

        let remaining = next.position.distance(&next.waypoint);
        let reach = next.speed * budget;
        if reach >= remaining {
            budget -= remaining / next.speed;
            next.distance_traveled += remaining;
            next.position = next.waypoint;
            next.pause_remaining = params.pause;
        } else {
            let f = reach / remaining;
            let p = Position::new(
                next.position.x + (next.waypoint.x - next.position.x) * f,
                next.position.y + (next.waypoint.y - next.position.y) * f,
            );
            next.position = params.area.clamp(p);
            next.distance_traveled += reach;
            budget = 0.0;
        }
    }
    next.elapsed += dt;
    Ok(next)
}

/// Average speed since the start of the run (`M_v`); 0 before any time has elapsed.
pub fn mean_speed(k: &Kinematics) -> f64 {
    if k.elapsed > 0.0 {
        k.distance_traveled / k.elapsed
    } else {
        0.0
    }
}

/// How per-node transmission ranges turn into (undirected) links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkRule {
    /// Link iff each endpoint is within the other's range.
    #[default]
    Mutual,
    /// Link iff either endpoint reaches the other.
    Either,
}

impl LinkRule {
    fn linked(self, d: f64, ru: f64, rv: f64) -> bool {
        match self {
            LinkRule::Mutual => d <= ru && d <= rv,
            LinkRule::Either => d <= ru || d <= rv,
        }
    }
}

/// Symmetric adjacency over the nodes currently in the network.
///
/// Capacity covers every node id the run may ever use; ids that have not
/// arrived yet or have died are simply not present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborGraph {
    present: Vec<bool>,
    adj: Vec<Vec<NodeId>>,
}

impl NeighborGraph {
    pub fn empty(capacity: usize) -> Self {
        Self {
            present: vec![false; capacity],
            adj: vec![Vec::new(); capacity],
        }
    }

    /// All `n` nodes present, with the given undirected edges. Self-loops and
    /// duplicate edges are ignored.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Self {
        let mut g = Self {
            present: vec![true; n],
            adj: vec![Vec::new(); n],
        };
        for &(u, v) in edges {
            assert!(
                u < n && v < n,
                "edge ({u}, {v}) out of bounds for {n} nodes"
            );
            if u != v {
                g.adj[u].push(v);
                g.adj[v].push(u);
            }
        }
        for list in &mut g.adj {
            list.sort_unstable();
            list.dedup();
        }
        g
    }

    /// Like [`NeighborGraph::from_edges`], but only nodes flagged in `present`
    /// exist; edges touching an absent node are dropped.
    pub fn from_edges_masked(present: &[bool], edges: &[(NodeId, NodeId)]) -> Self {
        let kept: Vec<_> = edges
            .iter()
            .copied()
            .filter(|&(u, v)| present[u] && present[v])
            .collect();
        let mut g = Self::from_edges(present.len(), &kept);
        g.present = present.to_vec();
        g
    }

    pub fn capacity(&self) -> usize {
        self.present.len()
    }

    pub fn is_present(&self, id: NodeId) -> bool {
        self.present.get(id).copied().unwrap_or(false)
    }

    /// Present node ids in ascending order.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter_map(|(i, &p)| p.then_some(i))
    }

    pub fn node_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    /// Sorted neighbor list; empty for absent nodes.
    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        self.adj.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.neighbors(id).len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let mut seen = vec![false; self.capacity()];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in self.node_ids() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn largest_component_size(&self) -> usize {
        self.components().iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Disk-model graph over every node, using the mutual-reachability rule.
pub fn build_neighbor_graph(positions: &[Position], ranges: &[f64]) -> NeighborGraph {
    let present = vec![true; positions.len()];
    build_neighbor_graph_masked(positions, ranges, &present, LinkRule::Mutual)
}

/// Disk-model graph restricted to the nodes flagged in `present`.
pub fn build_neighbor_graph_masked(
    positions: &[Position],
    ranges: &[f64],
    present: &[bool],
    rule: LinkRule,
) -> NeighborGraph {
    assert_eq!(positions.len(), ranges.len());
    assert_eq!(positions.len(), present.len());
    let n = positions.len();
    let mut adj = vec![Vec::new(); n];
    for u in 0..n {
        if !present[u] {
            continue;
        }
        for v in (u + 1)..n {
            if !present[v] {
                continue;
            }
            let d = positions[u].distance(&positions[v]);
            if rule.linked(d, ranges[u], ranges[v]) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }
    // Pushes happen in ascending order of the partner id, so lists are sorted.
    NeighborGraph {
        present: present.to_vec(),
        adj,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params() -> RwpParams {
        RwpParams {
            area: Area::default(),
            speed: SpeedRange::new(1.0, 10.0),
            pause: 0.0,
        }
    }

    #[test]
    fn straight_line_step() {
        let k = Kinematics::moving(Position::new(0.0, 0.0), Position::new(10.0, 0.0), 5.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let next = rwp_step(&k, 1.0, &params(), &mut rng).unwrap();
        assert_eq!(next.position, Position::new(5.0, 0.0));
        assert_eq!(next.distance_traveled, 5.0);
        assert_eq!(next.elapsed, 1.0);
    }

    #[test]
    fn pause_counts_down_in_place() {
        let p = Position::new(42.0, 17.0);
        let k = Kinematics::at_rest(p, 3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let next = rwp_step(&k, 1.0, &params(), &mut rng).unwrap();
        assert_eq!(next.pause_remaining, 2.0);
        assert_eq!(next.position, p);
    }

    #[test]
    fn arrival_starts_pause() {
        let k = Kinematics::moving(Position::new(0.0, 0.0), Position::new(3.0, 4.0), 10.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = RwpParams {
            pause: 7.0,
            ..params()
        };
        let next = rwp_step(&k, 1.0, &p, &mut rng).unwrap();
        assert_eq!(next.position, Position::new(3.0, 4.0));
        // 0.5 s of travel, then 0.5 s of the 7 s pause
        assert!((next.pause_remaining - 6.5).abs() < 1e-12);
        assert_eq!(next.distance_traveled, 5.0);
    }

    #[test]
    fn infinite_pause_never_moves() {
        let p = Position::new(1.0, 2.0);
        let mut k = Kinematics::at_rest(p, f64::INFINITY);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let prm = RwpParams {
            pause: f64::INFINITY,
            ..params()
        };
        for _ in 0..50 {
            k = rwp_step(&k, 1.0, &prm, &mut rng).unwrap();
        }
        assert_eq!(k.position, p);
        assert_eq!(mean_speed(&k), 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let k = Kinematics::at_rest(Position::new(0.0, 0.0), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(rwp_step(&k, 0.0, &params(), &mut rng).is_err());
        assert!(rwp_step(&k, -1.0, &params(), &mut rng).is_err());
        let zero_speed = RwpParams {
            speed: SpeedRange::new(0.0, 10.0),
            ..params()
        };
        assert!(rwp_step(&k, 1.0, &zero_speed, &mut rng).is_err());
    }

    #[test]
    fn seeded_trajectory_stays_in_area() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let prm = params();
        let mut k = Kinematics::at_rest(prm.area.random_point(&mut rng), 0.0);
        for _ in 0..100 {
            k = rwp_step(&k, 1.0, &prm, &mut rng).unwrap();
            assert!(prm.area.contains(&k.position), "{:?}", k.position);
        }
    }

    #[test]
    fn mean_speed_conventions() {
        let mut k = Kinematics::at_rest(Position::new(0.0, 0.0), 0.0);
        assert_eq!(mean_speed(&k), 0.0);
        k.distance_traveled = 100.0;
        k.elapsed = 10.0;
        assert_eq!(mean_speed(&k), 10.0);
    }

    #[test]
    fn constant_speed_leg_has_that_mean_speed() {
        // 7 m/s along a 200 m leg: 20 one-second steps never reach the waypoint.
        let mut k = Kinematics::moving(Position::new(10.0, 10.0), Position::new(210.0, 10.0), 7.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            k = rwp_step(&k, 1.0, &params(), &mut rng).unwrap();
        }
        assert!((mean_speed(&k) - 7.0).abs() < 1e-12);
        assert!((k.position.x - 150.0).abs() < 1e-9);
    }

    #[test]
    fn link_rules() {
        let pos = [Position::new(0.0, 0.0), Position::new(30.0, 0.0)];
        assert!(build_neighbor_graph(&pos, &[50.0, 50.0]).has_edge(0, 1));

        let pos = [Position::new(0.0, 0.0), Position::new(60.0, 0.0)];
        assert!(!build_neighbor_graph(&pos, &[50.0, 50.0]).has_edge(0, 1));
        assert!(!build_neighbor_graph(&pos, &[70.0, 50.0]).has_edge(0, 1));

        let either =
            build_neighbor_graph_masked(&pos, &[70.0, 50.0], &[true, true], LinkRule::Either);
        assert!(either.has_edge(0, 1) && either.has_edge(1, 0));
    }

    #[test]
    fn masked_nodes_have_no_edges() {
        let pos = [
            Position::new(0.0, 0.0),
            Position::new(1.0, 0.0),
            Position::new(2.0, 0.0),
        ];
        let g =
            build_neighbor_graph_masked(&pos, &[5.0; 3], &[true, false, true], LinkRule::Mutual);
        assert!(!g.is_present(1));
        assert!(g.neighbors(1).is_empty());
        assert_eq!(g.neighbors(0), &[2]);
        assert_eq!(g.node_ids().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn components_and_largest() {
        let g = NeighborGraph::from_edges(4, &[(0, 1), (1, 2)]);
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(g.largest_component_size(), 3);
        assert_eq!(g.edge_count(), 2);
    }
}
