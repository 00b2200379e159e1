//! Annulus cuts, the `4^m` partitions they induce, the eroded cover and its
//! measured multiplicity and diameters.
//!
//! Level `k` works in the residual graph `G_{k-1}` (host minus the earlier
//! cut sets). In every component `C` of `G_{k-1}` the root is the vertex of
//! smallest id, and `F_k` collects the edges whose endpoints sit at root
//! distances `4Rj + δ_k` and `4Rj + δ_k + 1`, with `R = s + 3`. Vertex ids
//! double as the enumeration order, so for Cayley balls the identity is
//! the first root.

mod cover;
mod select;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{bfs_restricted, component_labels, EdgeId, EdgeSet, Graph, VertexId, VertexSet, UNREACHED};

pub use cover::{
    build_cover, cover_diameter_report, s_multiplicity, separation_check, AmbientMetric, Cover, CoverElement,
    CoverPart, DiameterReport, Multiplicity, Separation,
};
pub use select::{nagata_witness, select_delta_for_vertex, select_deltas, ElementRow, NagataReport, ScaleReport};

/// Default ceiling on `m` for full partition enumeration (`4^6 = 4096`).
pub const DEFAULT_PARTITION_CAP: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KprError {
    #[error("m = {m} exceeds the partition cap {cap} (4^m partitions)")]
    OverCap { m: usize, cap: usize },
    #[error("m must be at least 1")]
    ZeroLevels,
    #[error("offset multiplier {0} is outside 0..=3")]
    BadDelta(usize),
    #[error("expected {expected} offsets, got {got}")]
    DeltaLength { expected: usize, got: usize },
    #[error("no scales given")]
    NoScales,
    #[error("host has no vertices")]
    EmptyHost,
    #[error("vertex {0} is not in the host")]
    UnknownVertex(VertexId),
}

/// Options shared by the partition builders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KprOptions {
    pub partition_cap: usize,
    /// Start annuli at `j = 1` instead of `j = 0`.
    pub j_from_one: bool,
}

impl Default for KprOptions {
    fn default() -> Self {
        KprOptions {
            partition_cap: DEFAULT_PARTITION_CAP,
            j_from_one: false,
        }
    }
}

/// Parameters of one cut sequence: `delta[k]` is the multiplier of `R`
/// for level `k` (so `δ_k = delta[k] * R`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutParams {
    pub s: usize,
    pub delta: Vec<usize>,
    pub j_from_one: bool,
}

impl CutParams {
    pub fn new(s: usize, delta: Vec<usize>) -> Result<Self, KprError> {
        if delta.is_empty() {
            return Err(KprError::ZeroLevels);
        }
        if let Some(&d) = delta.iter().find(|&&d| d > 3) {
            return Err(KprError::BadDelta(d));
        }
        Ok(CutParams {
            s,
            delta,
            j_from_one: false,
        })
    }

    pub fn with_j_from_one(mut self, on: bool) -> Self {
        self.j_from_one = on;
        self
    }

    pub fn m(&self) -> usize {
        self.delta.len()
    }

    pub fn r(&self) -> usize {
        self.s + 3
    }

    /// The offsets `δ_k` themselves.
    pub fn delta_values(&self) -> Vec<usize> {
        self.delta.iter().map(|d| d * self.r()).collect()
    }
}

/// One level of cuts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutLevel {
    pub edges: EdgeSet,
    /// Root of every component of the residual graph the level was cut in.
    pub roots: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSequence {
    pub params: CutParams,
    pub levels: Vec<CutLevel>,
}

/// Clusters of one cut sequence: the components of the host minus all cuts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub delta: Vec<usize>,
    pub clusters: Vec<VertexSet>,
    /// Cluster index of every vertex.
    pub cluster_of: Vec<usize>,
}

/// Working state for cutting level by level.
pub(crate) struct Residual<'g> {
    pub g: &'g Graph,
    pub removed: Vec<bool>,
}

impl<'g> Residual<'g> {
    pub fn new(g: &'g Graph) -> Self {
        Residual {
            g,
            removed: vec![false; g.num_edges()],
        }
    }

    /// Component roots and root distances in the current residual graph.
    pub fn rooted_distances(&self) -> (Vec<VertexId>, Vec<u32>) {
        let (labels, count) = component_labels(self.g, |e| !self.removed[e]);
        let mut roots = vec![usize::MAX; count];
        for (v, &c) in labels.iter().enumerate() {
            if roots[c] == usize::MAX {
                roots[c] = v;
            }
        }
        let dist = bfs_restricted(self.g, roots.iter().copied(), |e| !self.removed[e], |_| true, None);
        (roots, dist)
    }

    /// Edges of the next level for offset `delta` (absolute) and `4R`
    /// period, without removing them.
    pub fn level_edges(&self, dist: &[u32], delta: usize, period: usize, j_from_one: bool) -> Vec<EdgeId> {
        let first = delta + if j_from_one { period } else { 0 };
        (0..self.g.num_edges())
            .filter(|&e| !self.removed[e])
            .filter(|&e| {
                let (u, v) = self.g.edge(e);
                let (a, b) = (dist[u], dist[v]);
                if a == UNREACHED || b == UNREACHED || a.abs_diff(b) != 1 {
                    return false;
                }
                let lo = a.min(b) as usize;
                lo >= first && (lo - delta).is_multiple_of(period)
            })
            .collect()
    }

    /// Cuts one level; returns its edges and roots.
    pub fn cut(&mut self, delta: usize, period: usize, j_from_one: bool) -> (Vec<EdgeId>, Vec<VertexId>) {
        let (roots, dist) = self.rooted_distances();
        let edges = self.level_edges(&dist, delta, period, j_from_one);
        for &e in &edges {
            self.removed[e] = true;
        }
        (edges, roots)
    }
}

/// Builds `F_1..F_m` for the given offsets.
pub fn build_cuts(host: &Graph, params: &CutParams) -> CutSequence {
    let r = params.r();
    let mut res = Residual::new(host);
    let levels = params
        .delta_values()
        .into_iter()
        .map(|d| {
            let (ids, roots) = res.cut(d, 4 * r, params.j_from_one);
            CutLevel {
                edges: EdgeSet::from_ids(host, ids),
                roots,
            }
        })
        .collect();
    CutSequence {
        params: params.clone(),
        levels,
    }
}

/// Components of the host minus every cut edge, numbered by smallest member.
pub fn clusters_of(host: &Graph, cuts: &CutSequence) -> Partition {
    let mut removed = vec![false; host.num_edges()];
    for level in &cuts.levels {
        for e in level.edges.ids_in(host) {
            removed[e] = true;
        }
    }
    let (cluster_of, count) = component_labels(host, |e| !removed[e]);
    Partition {
        delta: cuts.params.delta.clone(),
        clusters: crate::graph::group_by_label(&cluster_of, count),
        cluster_of,
    }
}

/// Offset multipliers of partition number `index` in lexicographic order.
pub fn delta_of_index(index: usize, m: usize) -> Vec<usize> {
    (0..m).rev().map(|k| (index >> (2 * k)) & 3).collect()
}

/// Inverse of [`delta_of_index`].
pub fn index_of_delta(delta: &[usize]) -> usize {
    delta.iter().fold(0, |acc, &d| acc * 4 + d)
}

fn map_indices<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// All `4^m` cut sequences and partitions, in lexicographic offset order.
pub fn all_partitions(
    host: &Graph,
    m: usize,
    s: usize,
    opts: KprOptions,
) -> Result<Vec<(CutSequence, Partition)>, KprError> {
    if m == 0 {
        return Err(KprError::ZeroLevels);
    }
    if m > opts.partition_cap {
        return Err(KprError::OverCap {
            m,
            cap: opts.partition_cap,
        });
    }
    Ok(map_indices(1 << (2 * m), |i| {
        let params = CutParams::new(s, delta_of_index(i, m))
            .expect("multipliers are in range")
            .with_j_from_one(opts.j_from_one);
        let cuts = build_cuts(host, &params);
        let part = clusters_of(host, &cuts);
        (cuts, part)
    }))
}

/// Independent re-check of a partition and its cuts: every cut edge joins
/// consecutive annuli of its level (distances recomputed from scratch), the
/// clusters partition the vertices, each is connected without cut edges, and
/// no surviving edge joins two clusters. Returns the first problem found.
pub fn check_partition(host: &Graph, cuts: &CutSequence, part: &Partition) -> Option<String> {
    let n = host.num_vertices();
    let r = cuts.params.r();
    let deltas = cuts.params.delta_values();
    let mut removed: Vec<(VertexId, VertexId)> = Vec::new();
    for (k, level) in cuts.levels.iter().enumerate() {
        // residual adjacency rebuilt from the pair list
        let cut_so_far: EdgeSet = removed.iter().copied().collect();
        let mut dist = vec![usize::MAX; n];
        let mut root_of = vec![usize::MAX; n];
        for root in 0..n {
            if dist[root] != usize::MAX {
                continue;
            }
            dist[root] = 0;
            root_of[root] = root;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for w in host.neighbors(u) {
                    if dist[w] == usize::MAX && !cut_so_far.contains(u, w) {
                        dist[w] = dist[u] + 1;
                        root_of[w] = root;
                        queue.push_back(w);
                    }
                }
            }
        }
        for (u, v) in level.edges.iter() {
            if cut_so_far.contains(u, v) {
                return Some(format!("level {} reuses edge ({u},{v})", k + 1));
            }
            let (a, b) = (dist[u].min(dist[v]), dist[u].max(dist[v]));
            let j0 = if cuts.params.j_from_one { 1 } else { 0 };
            let ok = root_of[u] == root_of[v]
                && b == a + 1
                && a >= deltas[k] + 4 * r * j0
                && (a - deltas[k]).is_multiple_of(4 * r);
            if !ok {
                return Some(format!("level {} edge ({u},{v}) at distances {a},{b}", k + 1));
            }
        }
        removed.extend(level.edges.iter());
    }
    let all_cut: EdgeSet = removed.into_iter().collect();
    if part.cluster_of.len() != n {
        return Some("cluster map has the wrong length".into());
    }
    let mut seen = vec![false; n];
    for (c, set) in part.clusters.iter().enumerate() {
        for v in set.iter() {
            if seen[v] || part.cluster_of[v] != c {
                return Some(format!("vertex {v} is in two clusters"));
            }
            seen[v] = true;
        }
        let inside = set.mask(n);
        let reach = bfs_restricted(
            host,
            set.first(),
            |e| {
                let (a, b) = host.edge(e);
                !all_cut.contains(a, b)
            },
            |v| inside[v],
            None,
        );
        if set.iter().any(|v| reach[v] == UNREACHED) {
            return Some(format!("cluster {c} is not connected"));
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Some(format!("vertex {v} is in no cluster"));
    }
    for &(u, v) in host.edges() {
        if !all_cut.contains(u, v) && part.cluster_of[u] != part.cluster_of[v] {
            return Some(format!("edge ({u},{v}) joins two clusters"));
        }
    }
    None
}
