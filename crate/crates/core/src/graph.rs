//! Finite simple undirected graphs with the shortest-path metric.
//!
//! Vertices are dense integers `0..n`. Edges are stored once, canonically as
//! `(u, v)` with `u < v` and sorted lexicographically; every edge has a stable
//! [`EdgeId`] (its index in that sorted list) so that residual graphs can be
//! described by an edge mask instead of a copy.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

pub(crate) const UNREACHED: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {0} is not in the graph (n = {1})")]
    UnknownVertex(VertexId, usize),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex set spans more than one component")]
    Disconnected,
    #[error("vertex ids must be dense 0..n, found id {0}")]
    NonDenseIds(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<Option<String>>,
    edges: Vec<(VertexId, VertexId)>,
    offsets: Vec<usize>,
    adj: Vec<(VertexId, EdgeId)>,
}

impl Graph {
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        Self::from_parts(vec![None; n], edges)
    }

    /// Builds a graph from per-vertex labels and an edge list. Parallel
    /// edges collapse; self-loops and out-of-range endpoints are rejected.
    pub fn from_parts<I>(labels: Vec<Option<String>>, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let n = labels.len();
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::UnknownVertex(u, n));
            }
            if v >= n {
                return Err(GraphError::UnknownVertex(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        list.dedup();

        let mut degree = vec![0usize; n];
        for &(u, v) in &list {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut adj = vec![(0, 0); offsets[n]];
        for (id, &(u, v)) in list.iter().enumerate() {
            adj[fill[u]] = (v, id);
            fill[u] += 1;
            adj[fill[v]] = (u, id);
            fill[v] += 1;
        }
        for v in 0..n {
            adj[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Ok(Graph {
            labels,
            edges: list,
            offsets,
            adj,
        })
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Self::from_edges(n, edges).expect("valid complete graph")
    }

    /// Star with center 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("valid star")
    }

    /// `width x height` grid, vertex `(c, r)` has id `r * width + c`.
    pub fn grid(width: usize, height: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..height {
            for c in 0..width {
                let v = r * width + c;
                if c + 1 < width {
                    edges.push((v, v + 1));
                }
                if r + 1 < height {
                    edges.push((v, v + width));
                }
            }
        }
        Self::from_edges(width * height, edges).expect("valid grid")
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.num_vertices()
    }

    /// Canonical edge list: `u < v`, lexicographically sorted.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> (VertexId, VertexId) {
        self.edges[id]
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(v).and_then(|l| l.as_deref())
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.num_vertices()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v, self.num_vertices()))
        }
    }

    /// Neighbors with the id of the connecting edge, sorted by neighbor.
    pub fn incident(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incident(v).iter().map(|&(w, _)| w)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        if !self.contains(u) || !self.contains(v) {
            return None;
        }
        let row = self.incident(u);
        row.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| row[i].1)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Subgraph induced on `keep`, with vertices renumbered in increasing
    /// order. Returns the graph and the map new id -> old id.
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<VertexId>) {
        let old: Vec<VertexId> = keep.iter().filter(|&v| self.contains(v)).collect();
        let mut new_of = vec![usize::MAX; self.num_vertices()];
        for (i, &v) in old.iter().enumerate() {
            new_of[v] = i;
        }
        let labels = old.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_of[u] != usize::MAX && new_of[v] != usize::MAX)
            .map(|&(u, v)| (new_of[u], new_of[v]));
        (
            Graph::from_parts(labels, edges).expect("induced subgraph is simple"),
            old,
        )
    }
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct VertexSet(Vec<VertexId>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: VertexId) -> Self {
        VertexSet(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn first(&self) -> Option<VertexId> {
        self.0.first().copied()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn check_in(&self, g: &Graph) -> Result<(), GraphError> {
        match self.0.last() {
            Some(&v) if !g.contains(v) => Err(GraphError::UnknownVertex(v, g.num_vertices())),
            _ => Ok(()),
        }
    }

    pub(crate) fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for v in self.iter() {
            if v < n {
                m[v] = true;
            }
        }
        m
    }
}

impl From<Vec<VertexId>> for VertexSet {
    fn from(mut v: Vec<VertexId>) -> Self {
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<VertexSet> for Vec<VertexId> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<T: IntoIterator<Item = VertexId>>(iter: T) -> Self {
        VertexSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

/// Set of undirected edges, canonical `(min, max)` pairs, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<(VertexId, VertexId)>", into = "Vec<(VertexId, VertexId)>")]
pub struct EdgeSet(Vec<(VertexId, VertexId)>);

impl EdgeSet {
    pub fn from_ids(g: &Graph, ids: impl IntoIterator<Item = EdgeId>) -> Self {
        ids.into_iter().map(|e| g.edge(e)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        self.0.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.0.iter().copied()
    }

    /// Endpoints of all edges, as a vertex set.
    pub fn endpoints(&self) -> VertexSet {
        self.iter().flat_map(|(u, v)| [u, v]).collect()
    }

    /// Edge ids in `g`; pairs that are not edges of `g` are skipped.
    pub fn ids_in(&self, g: &Graph) -> Vec<EdgeId> {
        self.iter().filter_map(|(u, v)| g.edge_id(u, v)).collect()
    }
}

impl From<Vec<(VertexId, VertexId)>> for EdgeSet {
    fn from(v: Vec<(VertexId, VertexId)>) -> Self {
        v.into_iter().collect()
    }
}

impl From<EdgeSet> for Vec<(VertexId, VertexId)> {
    fn from(s: EdgeSet) -> Self {
        s.0
    }
}

impl FromIterator<(VertexId, VertexId)> for EdgeSet {
    fn from_iter<T: IntoIterator<Item = (VertexId, VertexId)>>(iter: T) -> Self {
        let mut v: Vec<_> = iter.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        v.sort_unstable();
        v.dedup();
        EdgeSet(v)
    }
}

/// Single-source (or multi-source) BFS distances; unreachable vertices are
/// absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distances(Vec<u32>);

impl Distances {
    pub fn get(&self, v: VertexId) -> Option<usize> {
        match self.0.get(v) {
            Some(&d) if d != UNREACHED => Some(d as usize),
            _ => None,
        }
    }

    /// `(vertex, distance)` for every reached vertex, by vertex id.
    pub fn iter(&self) -> impl Iterator<Item = (VertexId, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != UNREACHED)
            .map(|(v, &d)| (v, d as usize))
    }

    pub fn max(&self) -> Option<usize> {
        self.iter().map(|(_, d)| d).max()
    }
}

/// BFS restricted to edges with `edge_ok(id)` and vertices with
/// `vertex_ok(v)`; sources failing `vertex_ok` are skipped.
pub(crate) fn bfs_restricted(
    g: &Graph,
    sources: impl IntoIterator<Item = VertexId>,
    edge_ok: impl Fn(EdgeId) -> bool,
    vertex_ok: impl Fn(VertexId) -> bool,
    max_depth: Option<u32>,
) -> Vec<u32> {
    let mut dist = vec![UNREACHED; g.num_vertices()];
    let mut queue = VecDeque::new();
    for s in sources {
        if dist[s] == UNREACHED && vertex_ok(s) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        if max_depth.is_some_and(|cap| du >= cap) {
            continue;
        }
        for &(w, e) in g.incident(u) {
            if dist[w] == UNREACHED && edge_ok(e) && vertex_ok(w) {
                dist[w] = du + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn bfs_distances(g: &Graph, source: VertexId) -> Result<Distances, GraphError> {
    g.check_vertex(source)?;
    Ok(Distances(bfs_restricted(g, [source], |_| true, |_| true, None)))
}

/// Distance from the nearest of `sources`.
pub fn multi_source_distances(g: &Graph, sources: &VertexSet) -> Result<Distances, GraphError> {
    sources.check_in(g)?;
    Ok(Distances(bfs_restricted(g, sources.iter(), |_| true, |_| true, None)))
}

/// Vertices within distance `radius` of `center`, in BFS order.
pub fn ball(g: &Graph, center: VertexId, radius: usize) -> Vec<VertexId> {
    let mut order = vec![center];
    let mut dist = vec![UNREACHED; g.num_vertices()];
    dist[center] = 0;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        if dist[u] as usize >= radius {
            continue;
        }
        for w in g.neighbors(u) {
            if dist[w] == UNREACHED {
                dist[w] = dist[u] + 1;
                order.push(w);
            }
        }
    }
    order
}

/// Component index per vertex, for the subgraph of edges passing `edge_ok`.
/// Components are numbered in order of their smallest vertex id.
pub(crate) fn component_labels(g: &Graph, edge_ok: impl Fn(EdgeId) -> bool) -> (Vec<usize>, usize) {
    let n = g.num_vertices();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for root in 0..n {
        if comp[root] != usize::MAX {
            continue;
        }
        comp[root] = count;
        stack.push(root);
        while let Some(u) = stack.pop() {
            for &(w, e) in g.incident(u) {
                if comp[w] == usize::MAX && edge_ok(e) {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

pub(crate) fn group_by_label(labels: &[usize], count: usize) -> Vec<VertexSet> {
    let mut parts = vec![Vec::new(); count];
    for (v, &c) in labels.iter().enumerate() {
        parts[c].push(v);
    }
    parts.into_iter().map(VertexSet).collect()
}

/// Components ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<VertexSet> {
    let (labels, count) = component_labels(g, |_| true);
    group_by_label(&labels, count)
}

pub fn is_connected(g: &Graph) -> bool {
    g.num_vertices() > 0 && component_labels(g, |_| true).1 == 1
}

/// Whether the subgraph induced on `s` is connected. Empty sets are not.
pub fn is_connected_subset(g: &Graph, s: &VertexSet) -> Result<bool, GraphError> {
    s.check_in(g)?;
    let Some(start) = s.first() else {
        return Ok(false);
    };
    let inside = s.mask(g.num_vertices());
    let dist = bfs_restricted(g, [start], |_| true, |v| inside[v], None);
    Ok(s.iter().all(|v| dist[v] != UNREACHED))
}

/// Largest ambient (host-metric) distance between members of `s`.
pub fn set_diameter(g: &Graph, s: &VertexSet) -> Result<usize, GraphError> {
    s.check_in(g)?;
    if s.is_empty() {
        return Err(GraphError::EmptySet);
    }
    let mut best = 0;
    for u in s.iter() {
        let dist = bfs_restricted(g, [u], |_| true, |_| true, None);
        for v in s.iter() {
            if dist[v] == UNREACHED {
                return Err(GraphError::Disconnected);
            }
            best = best.max(dist[v] as usize);
        }
    }
    Ok(best)
}

/// Diameter of the subgraph induced on `s` (diagnostic companion to
/// [`set_diameter`]).
pub fn induced_diameter(g: &Graph, s: &VertexSet) -> Result<usize, GraphError> {
    s.check_in(g)?;
    if s.is_empty() {
        return Err(GraphError::EmptySet);
    }
    let inside = s.mask(g.num_vertices());
    let mut best = 0;
    for u in s.iter() {
        let dist = bfs_restricted(g, [u], |_| true, |v| inside[v], None);
        for v in s.iter() {
            if dist[v] == UNREACHED {
                return Err(GraphError::Disconnected);
            }
            best = best.max(dist[v] as usize);
        }
    }
    Ok(best)
}

/// Result of a vertex-disjoint path search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointPaths {
    /// Pairwise vertex-disjoint paths, each from a vertex of `a` to a vertex
    /// of `b`, touching `a` only at its start and `b` only at its end.
    pub paths: Vec<Vec<VertexId>>,
    /// Present when fewer than the requested number of paths exist: a vertex
    /// set meeting every a-b path, of size `paths.len()`.
    pub separator: Option<VertexSet>,
}

struct FlowNet {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i64>,
    next: Vec<usize>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            head: vec![usize::MAX; nodes],
            to: Vec::new(),
            cap: Vec::new(),
            next: Vec::new(),
        }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) {
        for (a, b, c) in [(u, v, c), (v, u, 0)] {
            self.to.push(b);
            self.cap.push(c);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    fn arcs(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let mut e = self.head[u];
        std::iter::from_fn(move || {
            if e == usize::MAX {
                None
            } else {
                let cur = e;
                e = self.next[e];
                Some(cur)
            }
        })
    }

    /// One BFS augmentation of a unit of flow. Returns false when none exists.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut via = vec![usize::MAX; self.head.len()];
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            let arcs: Vec<usize> = self.arcs(u).collect();
            for e in arcs.into_iter().rev() {
                let w = self.to[e];
                if !seen[w] && self.cap[e] > 0 {
                    seen[w] = true;
                    via[w] = e;
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut v = t;
        while v != s {
            let e = via[v];
            self.cap[e] -= 1;
            self.cap[e ^ 1] += 1;
            v = self.to[e ^ 1];
        }
        true
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for e in self.arcs(u) {
                let w = self.to[e];
                if !seen[w] && self.cap[e] > 0 {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// Up to `k` pairwise vertex-disjoint `a`-`b` paths by unit-capacity vertex
/// max-flow. When a side is a single vertex, paths share that endpoint and
/// are otherwise disjoint (the two-vertex form of Menger's theorem). When
/// fewer than `k` paths exist, a minimum vertex separator is returned
/// alongside the maximum family.
pub fn vertex_disjoint_paths(g: &Graph, a: &VertexSet, b: &VertexSet, k: usize) -> Result<DisjointPaths, GraphError> {
    a.check_in(g)?;
    b.check_in(g)?;
    let n = g.num_vertices();
    if a.len() == 1 && b.len() == 1 && a == b {
        let v = a.first().unwrap();
        return Ok(DisjointPaths {
            paths: if k > 0 { vec![vec![v]] } else { vec![] },
            separator: (k > 1).then(|| VertexSet::singleton(v)),
        });
    }
    let (vin, vout) = (|v: usize| 2 * v, |v: usize| 2 * v + 1);
    let (src, sink) = (2 * n, 2 * n + 1);
    let big = n as i64 + 1;
    let shared = |v: usize| (a.len() == 1 && a.contains(v)) != (b.len() == 1 && b.contains(v));
    let mut net = FlowNet::new(2 * n + 2);
    for v in 0..n {
        net.add(vin(v), vout(v), if shared(v) { big } else { 1 });
    }
    for &(u, v) in g.edges() {
        let c = if shared(u) && shared(v) { 1 } else { big };
        net.add(vout(u), vin(v), c);
        net.add(vout(v), vin(u), c);
    }
    for v in a.iter() {
        net.add(src, vin(v), big);
    }
    for v in b.iter() {
        net.add(vout(v), sink, big);
    }
    let original = net.cap.clone();

    let mut flow = 0;
    while flow < k && net.augment(src, sink) {
        flow += 1;
    }

    // Decompose the flow into paths, consuming one unit per arc traversal.
    let in_b = b.mask(n);
    let in_a = a.mask(n);
    let mut left: Vec<i64> = original.iter().zip(&net.cap).map(|(o, c)| (o - c).max(0)).collect();
    let mut paths = Vec::with_capacity(flow);
    let src_arcs: Vec<usize> = net.arcs(src).filter(|&e| e % 2 == 0).collect();
    for e in src_arcs {
        while left[e] > 0 {
            left[e] -= 1;
            let mut path = Vec::new();
            let mut v = net.to[e] / 2;
            loop {
                path.push(v);
                let next = net.arcs(vout(v)).find(|&f| f % 2 == 0 && left[f] > 0);
                let Some(f) = next else { break };
                left[f] -= 1;
                if net.to[f] == sink {
                    break;
                }
                v = net.to[f] / 2;
            }
            let end = path.iter().position(|&v| in_b[v]).unwrap_or(path.len() - 1);
            path.truncate(end + 1);
            let start = path.iter().rposition(|&v| in_a[v]).unwrap_or(0);
            paths.push(path.split_off(start));
        }
    }

    let separator = if paths.len() < k {
        let seen = net.reachable(src);
        Some((0..n).filter(|&v| seen[vin(v)] && !seen[vout(v)]).collect())
    } else {
        None
    };
    Ok(DisjointPaths { paths, separator })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn rejects_self_loops_and_unknown_vertices() {
        assert_eq!(Graph::from_edges(2, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::from_edges(2, [(0, 2)]), Err(GraphError::UnknownVertex(2, 2)));
        let g = Graph::from_edges(3, [(2, 0), (0, 2), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn bfs_on_path_and_grid() {
        let d = bfs_distances(&Graph::path(3), 0).unwrap();
        assert_eq!(d.iter().collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 2)]);
        let single = Graph::from_edges(1, []).unwrap();
        assert_eq!(bfs_distances(&single, 0).unwrap().get(0), Some(0));
        let grid = Graph::grid(3, 3);
        assert_eq!(bfs_distances(&grid, 0).unwrap().get(8), Some(4));
        assert!(bfs_distances(&grid, 9).is_err());
    }

    #[test]
    fn unreachable_vertices_are_absent() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let d = bfs_distances(&g, 0).unwrap();
        assert_eq!(d.get(2), None);
        assert_eq!(d.iter().count(), 2);
    }

    #[test]
    fn components() {
        let g = Graph::from_edges(3, []).unwrap();
        assert_eq!(connected_components(&g).len(), 3);
        assert_eq!(connected_components(&Graph::grid(4, 4)).len(), 1);
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(connected_components(&g), vec![set(&[0, 1]), set(&[2, 3])]);
    }

    #[test]
    fn connected_subsets() {
        let p = Graph::path(5);
        assert!(is_connected_subset(&p, &set(&[2])).unwrap());
        assert!(!is_connected_subset(&p, &set(&[])).unwrap());
        assert!(!is_connected_subset(&p, &set(&[0, 3])).unwrap());
        assert!(is_connected_subset(&p, &set(&[1, 2, 3])).unwrap());
        assert!(is_connected_subset(&p, &set(&[7])).is_err());
    }

    #[test]
    fn diameters() {
        let p = Graph::path(6);
        assert_eq!(set_diameter(&p, &set(&[3])).unwrap(), 0);
        assert_eq!(set_diameter(&p, &set(&[0, 1, 2, 3, 4, 5])).unwrap(), 5);
        assert_eq!(set_diameter(&p, &set(&[])), Err(GraphError::EmptySet));
        let two = Graph::from_edges(2, []).unwrap();
        assert_eq!(set_diameter(&two, &set(&[0, 1])), Err(GraphError::Disconnected));
        // ambient vs induced on a 4-cycle
        let c = Graph::cycle(4);
        assert_eq!(set_diameter(&c, &set(&[0, 1, 2, 3])).unwrap(), 2);
        assert_eq!(set_diameter(&c, &set(&[0, 1, 3])).unwrap(), 2);
        let c6 = Graph::cycle(6);
        assert_eq!(set_diameter(&c6, &set(&[0, 1, 2, 3, 4])).unwrap(), 3);
        assert_eq!(induced_diameter(&c6, &set(&[0, 1, 2, 3, 4])).unwrap(), 4);
    }

    #[test]
    fn disjoint_paths_examples() {
        let g = Graph::grid(3, 3);
        let r = vertex_disjoint_paths(&g, &set(&[4]), &set(&[4]), 1).unwrap();
        assert_eq!(r.paths, vec![vec![4]]);
        assert!(r.separator.is_none());

        let r = vertex_disjoint_paths(&g, &set(&[0]), &set(&[8]), 3).unwrap();
        assert_eq!(r.paths.len(), 2, "corner degree caps the count at 2");
        assert_eq!(r.separator.as_ref().map(|s| s.len()), Some(2));
        let inner: Vec<usize> = r.paths.iter().flat_map(|p| p[1..p.len() - 1].to_vec()).collect();
        assert_eq!(inner.iter().copied().collect::<VertexSet>().len(), inner.len());

        // opposite corners: disjoint paths between neighborhoods
        let r = vertex_disjoint_paths(&g, &set(&[1, 3]), &set(&[5, 7]), 2).unwrap();
        assert_eq!(r.paths.len(), 2);
        assert!(r.separator.is_none());

        let star = Graph::star(4);
        let r = vertex_disjoint_paths(&star, &set(&[1]), &set(&[2]), 2).unwrap();
        assert_eq!(r.paths, vec![vec![1, 0, 2]]);
        assert_eq!(r.separator, Some(set(&[0])));
    }

    #[test]
    fn separator_sits_between() {
        // two triangles joined through vertex 2
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        let r = vertex_disjoint_paths(&g, &set(&[0, 1]), &set(&[3, 4]), 2).unwrap();
        assert_eq!(r.paths.len(), 1);
        assert_eq!(r.separator, Some(set(&[2])));
    }
}
