//! Branch decompositions of clique (and other small pattern) minors.

mod construct;
mod oracle;
mod project;
mod search;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{is_connected, is_connected_subset, Graph, GraphError, VertexId, VertexSet};
use crate::groups::GroupError;

pub use construct::{construct_z2_s2_minor, construct_z2xc_minor, z2_s2_spec, ConstructedMinor};
pub use oracle::{brute_force_minor_oracle, ORACLE_MAX_VERTICES};
pub use project::{project_free_product_minor, Projection};
pub use search::{find_clique_minor, SearchOptions, SearchOutcome};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinorError {
    #[error("pattern order must be at least 1")]
    ZeroOrder,
    #[error("pattern graph is disconnected")]
    PatternDisconnected,
    #[error("pattern graph has a cut-vertex")]
    PatternHasCutVertex,
    #[error("host has {0} vertices, the exhaustive oracle accepts at most {ORACLE_MAX_VERTICES}")]
    HostTooLarge(usize),
    #[error("decomposition does not verify: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("branch set {0} does not meet any candidate factor copy")]
    EmptyIntersection(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The small graph looked for as a minor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternGraph {
    graph: Graph,
    complete: bool,
}

impl PatternGraph {
    pub fn complete(m: usize) -> Self {
        PatternGraph {
            graph: Graph::complete(m),
            complete: true,
        }
    }

    pub fn from_graph(graph: Graph) -> Self {
        let n = graph.num_vertices();
        let complete = graph.num_edges() == n * n.saturating_sub(1) / 2;
        PatternGraph { graph, complete }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Drops pattern vertex `i` (and its incident edges), renumbering the rest.
    pub fn without_vertex(&self, i: usize) -> PatternGraph {
        let keep: VertexSet = self.graph.vertices().filter(|&v| v != i).collect();
        PatternGraph::from_graph(self.graph.induced(&keep).0)
    }
}

impl fmt::Display for PatternGraph {
    /// `K<m>` for complete patterns, otherwise `G<n>:u-v,...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.complete {
            return write!(f, "K{}", self.order());
        }
        write!(f, "G{}:", self.order())?;
        for (i, (u, v)) in self.graph.edges().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{u}-{v}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PatternGraph {
    type Err = MinorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MinorError::Precondition(format!("cannot parse pattern {s:?}"));
        let s = s.trim();
        if let Some(m) = s.strip_prefix('K') {
            return Ok(PatternGraph::complete(m.parse().map_err(|_| bad())?));
        }
        let rest = s.strip_prefix('G').ok_or_else(bad)?;
        let (n, edges) = rest.split_once(':').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let mut list = Vec::new();
        for e in edges.split(',').filter(|e| !e.is_empty()) {
            let (u, v) = e.split_once('-').ok_or_else(bad)?;
            list.push((u.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?));
        }
        Ok(PatternGraph::from_graph(Graph::from_edges(n, list)?))
    }
}

impl Serialize for PatternGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PatternGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Candidate minor witness: branch set `i` stands for pattern vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchDecomposition {
    pub pattern: PatternGraph,
    pub sets: Vec<VertexSet>,
}

impl BranchDecomposition {
    pub fn new(pattern: PatternGraph, sets: Vec<VertexSet>) -> Self {
        BranchDecomposition { pattern, sets }
    }

    pub fn clique(sets: Vec<VertexSet>) -> Self {
        BranchDecomposition {
            pattern: PatternGraph::complete(sets.len()),
            sets,
        }
    }

    /// Drops branch set `i` together with its pattern vertex.
    pub fn without_set(&self, i: usize) -> BranchDecomposition {
        let mut sets = self.sets.clone();
        sets.remove(i);
        BranchDecomposition {
            pattern: self.pattern.without_vertex(i),
            sets,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check<W> {
    pub pass: bool,
    pub witness: Option<W>,
}

impl<W> Check<W> {
    fn from_witness(witness: Option<W>) -> Self {
        Check {
            pass: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overlap {
    pub sets: (usize, usize),
    pub vertex: VertexId,
}

/// Outcome of [`verify_minor`], one entry per minor condition with the
/// first failure found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    /// Number of branch sets equals the pattern order; witness is the set count.
    pub set_count: Check<usize>,
    /// Witness: a member id outside the host.
    pub in_host: Check<VertexId>,
    pub disjoint: Check<Overlap>,
    /// Witness: index of an empty or disconnected branch set.
    pub connected: Check<usize>,
    /// Witness: a pattern edge with no host edge between its sets.
    pub edges_realized: Check<(usize, usize)>,
}

impl Verdict {
    /// First failing condition, for messages.
    pub fn failure(&self) -> Option<String> {
        if let Some(n) = self.set_count.witness {
            return Some(format!("{n} branch sets for the pattern"));
        }
        if let Some(v) = self.in_host.witness {
            return Some(format!("vertex {v} is not in the host"));
        }
        if let Some(o) = &self.disjoint.witness {
            return Some(format!("sets {} and {} share vertex {}", o.sets.0, o.sets.1, o.vertex));
        }
        if let Some(i) = self.connected.witness {
            return Some(format!("set {i} is empty or disconnected"));
        }
        if let Some((i, j)) = self.edges_realized.witness {
            return Some(format!("no host edge joins sets {i} and {j}"));
        }
        None
    }
}

/// Checks the minor conditions: disjoint, nonempty connected branch sets,
/// and a host edge for every pattern edge.
pub fn verify_minor(host: &Graph, bd: &BranchDecomposition) -> Verdict {
    let n = host.num_vertices();
    let set_count = Check::from_witness((bd.sets.len() != bd.pattern.order()).then_some(bd.sets.len()));
    let in_host = Check::from_witness(bd.sets.iter().flat_map(|s| s.iter()).find(|&v| v >= n));

    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut overlap = None;
    'outer: for (i, s) in bd.sets.iter().enumerate() {
        for v in s.iter().filter(|&v| v < n) {
            match owner[v] {
                Some(j) => {
                    overlap = Some(Overlap {
                        sets: (j, i),
                        vertex: v,
                    });
                    break 'outer;
                }
                None => owner[v] = Some(i),
            }
        }
    }
    let disjoint = Check::from_witness(overlap);

    let connected = Check::from_witness(
        bd.sets
            .iter()
            .position(|s| s.check_in(host).is_err() || !is_connected_subset(host, s).unwrap_or(false)),
    );

    let mut joined = HashSet::new();
    for &(u, v) in host.edges() {
        if let (Some(a), Some(b)) = (owner[u], owner[v]) {
            if a != b {
                joined.insert((a.min(b), a.max(b)));
            }
        }
    }
    let missing = bd
        .pattern
        .graph()
        .edges()
        .iter()
        .copied()
        .find(|&(i, j)| i >= bd.sets.len() || j >= bd.sets.len() || !joined.contains(&(i, j)));
    let edges_realized = Check::from_witness(missing);

    Verdict {
        pass: set_count.pass && in_host.pass && disjoint.pass && connected.pass && edges_realized.pass,
        set_count,
        in_host,
        disjoint,
        connected,
        edges_realized,
    }
}

/// Whether deleting some vertex increases the number of components.
pub fn has_cut_vertex(pattern: &PatternGraph) -> Result<bool, MinorError> {
    let g = pattern.graph();
    if !is_connected(g) {
        return Err(MinorError::PatternDisconnected);
    }
    Ok(g.vertices().any(|v| {
        let rest: VertexSet = g.vertices().filter(|&u| u != v).collect();
        !rest.is_empty() && !is_connected(&g.induced(&rest).0)
    }))
}
