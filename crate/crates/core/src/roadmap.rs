//! Incremental starshaped roadmap: frontier nodes, expansion, stuck marking and
//! short-term goal selection by shortest-path search.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontier::FrontierCandidate;
use crate::geometry::Point2;
use crate::scalar::Real;
use crate::starshape::{RegionId, StarshapedRegion};

/// Distance at which the robot counts as having reached its short-term goal.
pub const REACH_THRESHOLD: f64 = 0.2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RoadmapError {
    #[error("unknown node {0:?}")]
    UnknownNode(NodeId),
    #[error("node {0:?} is already expanded")]
    AlreadyExpanded(NodeId),
    #[error("node {id:?} cannot go from {from:?} to {to:?}")]
    InvalidTransition { id: NodeId, from: NodeStatus, to: NodeStatus },
    #[error("start position lies outside its region")]
    StartOutsideRegion,
    #[error("no path: every route is blocked")]
    NoPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeStatus {
    Extendable,
    Expanded,
    Stuck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct RoadmapNode<T> {
    pub id: NodeId,
    pub position: Point2<T>,
    pub region: Option<StarshapedRegion<T>>,
    pub status: NodeStatus,
}

/// Outcome of [`Roadmap::expand_node`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expansion {
    /// The node is now expanded; these nodes were created (and possibly edges to
    /// existing nodes added).
    Grew(Vec<NodeId>),
    /// Every candidate was already covered. The node was left untouched so the caller
    /// can mark it stuck.
    NoNewFrontiers,
}

/// The roadmap `ℛ(𝒩, ℰ)`. Node ids are dense indices and never reused.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawRoadmap<T>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct Roadmap<T> {
    nodes: Vec<RoadmapNode<T>>,
    edges: BTreeSet<(NodeId, NodeId)>,
    #[serde(skip)]
    adjacency: Vec<Vec<NodeId>>,
    #[serde(skip)]
    replan: bool,
    /// Candidates closer than this to an existing node are not added as new nodes.
    pub dedup_radius: T,
}

#[derive(Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
struct RawRoadmap<T> {
    nodes: Vec<RoadmapNode<T>>,
    edges: BTreeSet<(NodeId, NodeId)>,
    dedup_radius: T,
}

impl<T: Real> TryFrom<RawRoadmap<T>> for Roadmap<T> {
    type Error = RoadmapError;
    fn try_from(raw: RawRoadmap<T>) -> Result<Self, Self::Error> {
        if let Some(n) = raw.nodes.iter().enumerate().find(|(i, n)| n.id.index() != *i) {
            return Err(RoadmapError::UnknownNode(n.1.id));
        }
        if let Some(&(a, b)) = raw
            .edges
            .iter()
            .find(|(a, b)| a == b || a.index() >= raw.nodes.len() || b.index() >= raw.nodes.len())
        {
            return Err(RoadmapError::UnknownNode(if a.index() >= raw.nodes.len() { a } else { b }));
        }
        let mut rm = Roadmap {
            nodes: raw.nodes,
            edges: raw.edges.into_iter().map(|(a, b)| ordered_edge(a, b)).collect(),
            adjacency: Vec::new(),
            replan: false,
            dedup_radius: raw.dedup_radius,
        };
        rm.reindex();
        Ok(rm)
    }
}

impl<T: Real> PartialEq for Roadmap<T> {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges && self.dedup_radius == other.dedup_radius
    }
}

/// Result of short-term goal selection.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortTermGoal<T> {
    /// Roadmap nodes visited after the robot, in order.
    pub path: Vec<NodeId>,
    /// Next position to steer toward (`p_sg`).
    pub target: Point2<T>,
    /// Node id of `target`, `None` when the target is the goal itself.
    pub target_node: Option<NodeId>,
    /// Whether the path ends at the goal rather than at an exploration node.
    pub reaches_goal: bool,
    pub cost: T,
}

fn ordered_edge(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl<T: Real> Roadmap<T> {
    /// Roadmap with a single expanded root at `start`.
    pub fn new(start: Point2<T>, region: StarshapedRegion<T>) -> Result<Self, RoadmapError> {
        if !region.contains(start, T::zero()) {
            return Err(RoadmapError::StartOutsideRegion);
        }
        let root = NodeId(0);
        Ok(Self {
            nodes: vec![RoadmapNode {
                id: root,
                position: start,
                region: Some(region.with_id(RegionId(0))),
                status: NodeStatus::Expanded,
            }],
            edges: BTreeSet::new(),
            adjacency: vec![Vec::new()],
            replan: false,
            dedup_radius: T::lit(0.3),
        })
    }

    fn reindex(&mut self) {
        self.adjacency = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            self.adjacency[a.index()].push(b);
            self.adjacency[b.index()].push(a);
        }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn nodes(&self) -> &[RoadmapNode<T>] {
        &self.nodes
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, id: NodeId) -> Result<&RoadmapNode<T>, RoadmapError> {
        self.nodes.get(id.index()).ok_or(RoadmapError::UnknownNode(id))
    }

    pub fn neighbours(&self, id: NodeId) -> &[NodeId] {
        self.adjacency.get(id.index()).map_or(&[], Vec::as_slice)
    }

    pub fn regions(&self) -> impl Iterator<Item = &StarshapedRegion<T>> {
        self.nodes.iter().filter_map(|n| n.region.as_ref())
    }

    /// Adds a new extendable node with no edges.
    pub fn add_node(&mut self, position: Point2<T>) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(RoadmapNode {
            id,
            position,
            region: None,
            status: NodeStatus::Extendable,
        });
        self.adjacency.push(Vec::new());
        id
    }

    /// Attaches a region to an extendable node without adding frontiers.
    pub fn set_expanded(&mut self, id: NodeId, region: StarshapedRegion<T>) -> Result<(), RoadmapError> {
        let node = self.nodes.get_mut(id.index()).ok_or(RoadmapError::UnknownNode(id))?;
        match node.status {
            NodeStatus::Extendable => {
                node.status = NodeStatus::Expanded;
                node.region = Some(region.with_id(RegionId(id.0 as u64)));
                Ok(())
            }
            NodeStatus::Expanded => Err(RoadmapError::AlreadyExpanded(id)),
            NodeStatus::Stuck => Err(RoadmapError::InvalidTransition {
                id,
                from: NodeStatus::Stuck,
                to: NodeStatus::Expanded,
            }),
        }
    }

    /// Adds an undirected edge; self-edges and duplicates are ignored.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<bool, RoadmapError> {
        self.node(a)?;
        self.node(b)?;
        if a == b || !self.edges.insert(ordered_edge(a, b)) {
            return Ok(false);
        }
        self.adjacency[a.index()].push(b);
        self.adjacency[b.index()].push(a);
        Ok(true)
    }

    /// Expands `id` with `region` and its frontier candidates.
    ///
    /// Candidates inside another expanded node's region are discarded. A candidate within
    /// `dedup_radius` of an existing extendable or expanded node is linked to that node
    /// instead of creating a duplicate; one near a stuck node is dropped. If nothing new
    /// results and `id` is not the root, the node is left extendable and
    /// [`Expansion::NoNewFrontiers`] is returned.
    pub fn expand_node(
        &mut self,
        id: NodeId,
        region: StarshapedRegion<T>,
        frontiers: &[FrontierCandidate<T>],
    ) -> Result<Expansion, RoadmapError> {
        let node = self.node(id)?;
        let is_root = id == self.root();
        match node.status {
            NodeStatus::Extendable => {}
            NodeStatus::Expanded if is_root && self.neighbours(id).is_empty() => {}
            NodeStatus::Expanded => return Err(RoadmapError::AlreadyExpanded(id)),
            NodeStatus::Stuck => {
                return Err(RoadmapError::InvalidTransition {
                    id,
                    from: NodeStatus::Stuck,
                    to: NodeStatus::Expanded,
                })
            }
        }
        let mut fresh = Vec::new();
        let mut links = Vec::new();
        for cand in frontiers {
            let p = cand.position;
            let covered = self
                .nodes
                .iter()
                .filter(|n| n.id != id)
                .filter_map(|n| n.region.as_ref())
                .any(|r| r.contains(p, T::zero()));
            if covered {
                continue;
            }
            let near = self
                .nodes
                .iter()
                .filter(|n| n.id != id)
                .map(|n| (n, n.position.distance(p)))
                .filter(|(_, d)| *d < self.dedup_radius)
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal).then(a.0.id.cmp(&b.0.id)));
            match near {
                Some((n, _)) if n.status == NodeStatus::Stuck => {}
                Some((n, _)) => links.push(n.id),
                None => {
                    if fresh.iter().all(|q: &Point2<T>| q.distance(p) >= self.dedup_radius) {
                        fresh.push(p);
                    }
                }
            }
        }
        if fresh.is_empty() && !is_root {
            return Ok(Expansion::NoNewFrontiers);
        }
        if is_root {
            self.nodes[id.index()].region = Some(region.with_id(RegionId(id.0 as u64)));
        } else {
            self.set_expanded(id, region)?;
        }
        let mut created = Vec::with_capacity(fresh.len());
        for p in fresh {
            let n = self.add_node(p);
            self.add_edge(id, n)?;
            created.push(n);
        }
        for l in links {
            self.add_edge(id, l)?;
        }
        Ok(Expansion::Grew(created))
    }

    /// Marks an extendable node stuck and raises the replan flag.
    pub fn mark_stuck(&mut self, id: NodeId) -> Result<(), RoadmapError> {
        let node = self.nodes.get_mut(id.index()).ok_or(RoadmapError::UnknownNode(id))?;
        if node.status != NodeStatus::Extendable {
            return Err(RoadmapError::InvalidTransition {
                id,
                from: node.status,
                to: NodeStatus::Stuck,
            });
        }
        node.status = NodeStatus::Stuck;
        self.replan = true;
        Ok(())
    }

    /// Returns the replan flag and clears it.
    pub fn take_replan(&mut self) -> bool {
        std::mem::take(&mut self.replan)
    }

    pub fn replan_pending(&self) -> bool {
        self.replan
    }

    /// Expanded regions containing `p`.
    pub fn regions_containing(&self, p: Point2<T>) -> Vec<&StarshapedRegion<T>> {
        self.nodes
            .iter()
            .filter(|n| n.status == NodeStatus::Expanded)
            .filter_map(|n| n.region.as_ref())
            .filter(|r| r.contains(p, T::zero()))
            .collect()
    }

    /// Non-stuck nodes the robot can head for directly: every node lying inside an
    /// expanded region that contains the robot. Falls back to the nearest non-stuck node
    /// when the robot has drifted outside all regions.
    fn start_links(&self, robot: Point2<T>) -> Vec<NodeId> {
        let containing = self.regions_containing(robot);
        let mut out: Vec<NodeId> = self
            .nodes
            .iter()
            .filter(|n| n.status != NodeStatus::Stuck)
            .filter(|n| {
                n.region.as_ref().is_some_and(|r| containing.iter().any(|c| c.id == r.id))
                    || containing.iter().any(|c| c.contains(n.position, T::zero()))
            })
            .map(|n| n.id)
            .collect();
        if out.is_empty() {
            if let Some(n) = self
                .nodes
                .iter()
                .filter(|n| n.status != NodeStatus::Stuck)
                .min_by(|a, b| {
                    a.position
                        .distance(robot)
                        .partial_cmp(&b.position.distance(robot))
                        .unwrap_or(Ordering::Equal)
                        .then(a.id.cmp(&b.id))
                })
            {
                out.push(n.id);
            }
        }
        out
    }

    /// Dijkstra from the robot over non-stuck nodes. Returns per-node cost and
    /// predecessor (`None` predecessor means the robot itself).
    fn search_from(&self, robot: Point2<T>) -> (Vec<Option<T>>, Vec<Option<NodeId>>) {
        let n = self.nodes.len();
        let mut dist: Vec<Option<T>> = vec![None; n];
        let mut prev: Vec<Option<NodeId>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        for id in self.start_links(robot) {
            let d = self.nodes[id.index()].position.distance(robot);
            if dist[id.index()].is_none_or(|old| d < old) {
                dist[id.index()] = Some(d);
                heap.push(Entry { cost: d, id });
            }
        }
        while let Some(Entry { cost, id }) = heap.pop() {
            if done[id.index()] {
                continue;
            }
            done[id.index()] = true;
            let here = self.nodes[id.index()].position;
            for &nb in self.neighbours(id) {
                if self.nodes[nb.index()].status == NodeStatus::Stuck || done[nb.index()] {
                    continue;
                }
                let c = cost + here.distance(self.nodes[nb.index()].position);
                let better = match dist[nb.index()] {
                    None => true,
                    Some(old) => c < old || (c == old && prev[nb.index()].is_some_and(|p| id < p)),
                };
                if better {
                    dist[nb.index()] = Some(c);
                    prev[nb.index()] = Some(id);
                    heap.push(Entry { cost: c, id: nb });
                }
            }
        }
        (dist, prev)
    }

    fn path_to(prev: &[Option<NodeId>], end: NodeId) -> Vec<NodeId> {
        let mut path = vec![end];
        let mut cur = end;
        while let Some(p) = prev[cur.index()] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Selects the short-term goal `p_sg` for a robot at `robot` heading for `goal`.
    ///
    /// The robot is a virtual start vertex linked to every non-stuck node inside an
    /// expanded region that contains it. If the goal lies in some expanded region, the
    /// shortest path to a virtual goal vertex attached to those regions' nodes is used.
    /// Otherwise the target is the extendable node minimising path cost plus straight-line
    /// distance to the goal (ties to the smaller id).
    pub fn plan_short_term_goal(&self, robot: Point2<T>, goal: Point2<T>) -> Result<ShortTermGoal<T>, RoadmapError> {
        if self.nodes.is_empty() {
            return Err(RoadmapError::NoPath);
        }
        if self.regions_containing(robot).iter().any(|r| r.contains(goal, T::zero())) {
            return Ok(ShortTermGoal {
                path: Vec::new(),
                target: goal,
                target_node: None,
                reaches_goal: true,
                cost: robot.distance(goal),
            });
        }
        let (dist, prev) = self.search_from(robot);
        let goal_hosts = self.nodes.iter().filter(|n| {
            n.status == NodeStatus::Expanded && n.region.as_ref().is_some_and(|r| r.contains(goal, T::zero()))
        });
        let mut best: Option<(T, NodeId)> = None;
        for n in goal_hosts {
            if let Some(d) = dist[n.index_usize()] {
                let c = d + n.position.distance(goal);
                if best.is_none_or(|(bc, bid)| c < bc || (c == bc && n.id < bid)) {
                    best = Some((c, n.id));
                }
            }
        }
        if let Some((cost, host)) = best {
            let path = Self::path_to(&prev, host);
            let first = path[0];
            return Ok(ShortTermGoal {
                target: self.nodes[first.index()].position,
                target_node: Some(first),
                path,
                reaches_goal: true,
                cost,
            });
        }
        let mut best: Option<(T, NodeId)> = None;
        for n in self.nodes.iter().filter(|n| n.status == NodeStatus::Extendable) {
            if let Some(d) = dist[n.index_usize()] {
                let c = d + n.position.distance(goal);
                if best.is_none_or(|(bc, bid)| c < bc || (c == bc && n.id < bid)) {
                    best = Some((c, n.id));
                }
            }
        }
        let (_, target) = best.ok_or(RoadmapError::NoPath)?;
        let path = Self::path_to(&prev, target);
        let first = path[0];
        Ok(ShortTermGoal {
            target: self.nodes[first.index()].position,
            target_node: Some(first),
            cost: dist[target.index()].unwrap_or(T::zero()),
            path,
            reaches_goal: false,
        })
    }

    /// Length of the shortest node-to-node path over non-stuck nodes, for analysis.
    pub fn shortest_path(&self, from: NodeId, to: NodeId) -> Option<(T, Vec<NodeId>)> {
        self.node(from).ok()?;
        self.node(to).ok()?;
        if self.nodes[from.index()].status == NodeStatus::Stuck || self.nodes[to.index()].status == NodeStatus::Stuck {
            return None;
        }
        let n = self.nodes.len();
        let mut dist: Vec<Option<T>> = vec![None; n];
        let mut prev: Vec<Option<NodeId>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[from.index()] = Some(T::zero());
        heap.push(Entry { cost: T::zero(), id: from });
        while let Some(Entry { cost, id }) = heap.pop() {
            if done[id.index()] {
                continue;
            }
            done[id.index()] = true;
            if id == to {
                break;
            }
            for &nb in self.neighbours(id) {
                if self.nodes[nb.index()].status == NodeStatus::Stuck || done[nb.index()] {
                    continue;
                }
                let c = cost + self.nodes[id.index()].position.distance(self.nodes[nb.index()].position);
                if dist[nb.index()].is_none_or(|old| c < old) {
                    dist[nb.index()] = Some(c);
                    prev[nb.index()] = Some(id);
                    heap.push(Entry { cost: c, id: nb });
                }
            }
        }
        let cost = dist[to.index()]?;
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur.index()]?;
            path.push(cur);
        }
        path.reverse();
        Some((cost, path))
    }
}

impl<T> RoadmapNode<T> {
    fn index_usize(&self) -> usize {
        self.id.index()
    }
}

struct Entry<T> {
    cost: T,
    id: NodeId,
}

impl<T: Real> PartialEq for Entry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Entry<T> {}

impl<T: Real> PartialOrd for Entry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Entry<T> {
    // min-heap on cost, then on id
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .partial_cmp(&self.cost)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.id.cmp(&self.id))
    }
}
