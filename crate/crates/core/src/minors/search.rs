//! Backtracking search for `K_m` minors.
//!
//! Branch sets start at seed vertices and grow one vertex at a time. At
//! each step the first pair of sets not yet joined by an edge is chosen
//! and one of the two sets is extended by a free neighbor; neighbors are
//! tried in order of their free-vertex distance to the other set, then by
//! id. Visited states are remembered through an incremental Zobrist hash.
//!
//! A first pass uses well-separated seeds without further restrictions and
//! a small share of the budget. The second pass is exhaustive: seeds run
//! over increasing tuples and set `i` only uses vertices not smaller than
//! its seed, which is no loss since any model can be ordered by the
//! minimum of its sets. Cheap exact tests (2-core, edge count, and for
//! `m >= 4` series-parallel reducibility) settle many negative cases up
//! front.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{BranchDecomposition, MinorError};
use crate::graph::{Graph, VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of search-node expansions.
    pub budget: u64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found {
        decomposition: BranchDecomposition,
        expansions: u64,
    },
    NotFound {
        expansions: u64,
        /// The whole search space was explored (or an exact test applied),
        /// so the host has no such minor.
        exhaustive: bool,
        reason: String,
    },
}

impl SearchOutcome {
    pub fn decomposition(&self) -> Option<&BranchDecomposition> {
        match self {
            SearchOutcome::Found { decomposition, .. } => Some(decomposition),
            SearchOutcome::NotFound { .. } => None,
        }
    }

    pub fn expansions(&self) -> u64 {
        match self {
            SearchOutcome::Found { expansions, .. } | SearchOutcome::NotFound { expansions, .. } => *expansions,
        }
    }
}

fn not_found(expansions: u64, exhaustive: bool, reason: impl Into<String>) -> SearchOutcome {
    SearchOutcome::NotFound {
        expansions,
        exhaustive,
        reason: reason.into(),
    }
}

/// Vertices of the 2-core (iteratively strip degree `<= 1`).
fn two_core(g: &Graph) -> Vec<bool> {
    let mut alive = vec![true; g.num_vertices()];
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut queue: VecDeque<VertexId> = g.vertices().filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for u in g.neighbors(v) {
            if alive[u] {
                deg[u] -= 1;
                if deg[u] == 1 {
                    queue.push_back(u);
                }
            }
        }
    }
    alive
}

/// Whether repeated deletion of degree `<= 1` vertices and suppression of
/// degree-2 vertices empties the graph, i.e. the graph has no `K_4` minor.
fn series_parallel_reducible(g: &Graph, alive: &[bool]) -> bool {
    let mut adj: Vec<HashSet<VertexId>> = g
        .vertices()
        .map(|v| {
            if alive[v] {
                g.neighbors(v).filter(|&u| alive[u]).collect()
            } else {
                HashSet::new()
            }
        })
        .collect();
    let mut present = alive.to_vec();
    let mut queue: VecDeque<VertexId> = g.vertices().filter(|&v| present[v] && adj[v].len() <= 2).collect();
    while let Some(v) = queue.pop_front() {
        if !present[v] || adj[v].len() > 2 {
            continue;
        }
        present[v] = false;
        let nb: Vec<VertexId> = adj[v].drain().collect();
        for &u in &nb {
            adj[u].remove(&v);
        }
        if let [a, b] = nb[..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        for u in nb {
            if adj[u].len() <= 2 {
                queue.push_back(u);
            }
        }
    }
    !present.iter().any(|&p| p)
}

const FREE: u32 = u32::MAX;

struct Search<'a> {
    g: &'a Graph,
    alive: &'a [bool],
    m: usize,
    owner: Vec<u32>,
    sets: Vec<Vec<VertexId>>,
    min_id: Vec<VertexId>,
    /// Host edges between each pair of sets, `links[i*m+j]` for `i < j`.
    links: Vec<u32>,
    zobrist: &'a [u128],
    hash: u128,
    visited: HashSet<u128>,
    expansions: u64,
    budget: u64,
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, alive: &'a [bool], m: usize, zobrist: &'a [u128], budget: u64) -> Self {
        Search {
            g,
            alive,
            m,
            owner: vec![FREE; g.num_vertices()],
            sets: vec![Vec::new(); m],
            min_id: vec![0; m],
            links: vec![0; m * m],
            zobrist,
            hash: 0,
            visited: HashSet::new(),
            expansions: 0,
            budget,
        }
    }

    fn key(&self, v: VertexId, set: usize) -> u128 {
        self.zobrist[v * self.m + set]
    }

    fn add(&mut self, v: VertexId, set: usize) {
        self.owner[v] = set as u32;
        self.sets[set].push(v);
        self.hash ^= self.key(v, set);
        for u in self.g.neighbors(v) {
            let o = self.owner[u];
            if o != FREE && o as usize != set {
                let (a, b) = (set.min(o as usize), set.max(o as usize));
                self.links[a * self.m + b] += 1;
            }
        }
    }

    fn remove(&mut self, v: VertexId, set: usize) {
        for u in self.g.neighbors(v) {
            let o = self.owner[u];
            if o != FREE && o as usize != set {
                let (a, b) = (set.min(o as usize), set.max(o as usize));
                self.links[a * self.m + b] -= 1;
            }
        }
        self.hash ^= self.key(v, set);
        let popped = self.sets[set].pop();
        debug_assert_eq!(popped, Some(v));
        self.owner[v] = FREE;
    }

    fn clear(&mut self) {
        for i in 0..self.m {
            while let Some(&v) = self.sets[i].last() {
                self.remove(v, i);
            }
        }
    }

    fn first_unlinked(&self) -> Option<(usize, usize)> {
        (0..self.m)
            .flat_map(|i| (i + 1..self.m).map(move |j| (i, j)))
            .find(|&(i, j)| self.links[i * self.m + j] == 0)
    }

    fn usable(&self, v: VertexId, set: usize) -> bool {
        self.alive[v] && self.owner[v] == FREE && v >= self.min_id[set]
    }

    /// Distances from set `from` through free vertices usable by `a` or `b`.
    fn free_distances(&self, from: usize, a: usize, b: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.g.num_vertices()];
        let mut queue = VecDeque::new();
        for &v in &self.sets[from] {
            dist[v] = 0;
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            for u in self.g.neighbors(v) {
                if dist[u] == u32::MAX && (self.usable(u, a) || self.usable(u, b)) {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    fn candidates(&self, i: usize, j: usize) -> Option<Vec<(u32, VertexId, usize)>> {
        let to_j = self.free_distances(j, i, j);
        let to_i = self.free_distances(i, i, j);
        // some free path must join the two sets
        let joinable = self.sets[i]
            .iter()
            .any(|&v| self.g.neighbors(v).any(|u| to_j[u] != u32::MAX));
        if !joinable {
            return None;
        }
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (set, other) in [(i, &to_j), (j, &to_i)] {
            for &v in &self.sets[set] {
                for u in self.g.neighbors(v) {
                    if self.usable(u, set) && other[u] != u32::MAX && seen.insert((u, set)) {
                        out.push((other[u], u, set));
                    }
                }
            }
        }
        out.sort_unstable();
        Some(out)
    }

    fn dfs(&mut self) -> Step {
        self.expansions += 1;
        if self.expansions > self.budget {
            return Step::OutOfBudget;
        }
        let Some((i, j)) = self.first_unlinked() else {
            return Step::Found;
        };
        let Some(cands) = self.candidates(i, j) else {
            return Step::Exhausted;
        };
        for (_, v, set) in cands {
            self.add(v, set);
            if self.visited.insert(self.hash) {
                match self.dfs() {
                    Step::Exhausted => {}
                    other => return other,
                }
            }
            self.remove(v, set);
        }
        Step::Exhausted
    }

    /// Runs from the given seeds; `canonical` restricts set `i` to ids
    /// `>= seeds[i]`.
    fn run(&mut self, seeds: &[VertexId], canonical: bool) -> Step {
        self.clear();
        for (i, &s) in seeds.iter().enumerate() {
            self.min_id[i] = if canonical { s } else { 0 };
            self.add(s, i);
        }
        if !self.visited.insert(self.hash) {
            return Step::Exhausted;
        }
        self.dfs()
    }

    fn decomposition(&self) -> BranchDecomposition {
        BranchDecomposition::clique(self.sets.iter().map(|s| VertexSet::from(s.clone())).collect())
    }
}

/// Seeds spread out by repeated farthest-point selection from a random
/// start.
fn separated_seeds(g: &Graph, alive: &[bool], m: usize, rng: &mut ChaCha8Rng) -> Vec<VertexId> {
    let live: Vec<VertexId> = g.vertices().filter(|&v| alive[v]).collect();
    let mut seeds = vec![live[rng.gen_range(0..live.len())]];
    let mut nearest = vec![u32::MAX; g.num_vertices()];
    while seeds.len() < m {
        let d = crate::graph::bfs_restricted(g, [*seeds.last().unwrap()], |_| true, |v| alive[v], None);
        for v in 0..nearest.len() {
            nearest[v] = nearest[v].min(d[v]);
        }
        let next = live.iter().copied().filter(|v| !seeds.contains(v)).max_by_key(|&v| {
            (
                if nearest[v] == u32::MAX { 0 } else { nearest[v] },
                std::cmp::Reverse(v),
            )
        });
        seeds.push(next.expect("enough live vertices"));
    }
    seeds
}

/// Advances an increasing tuple over `pool`; false when exhausted.
fn next_tuple(idx: &mut [usize], pool: usize) -> bool {
    let m = idx.len();
    for pos in (0..m).rev() {
        if idx[pos] < pool - (m - pos) {
            idx[pos] += 1;
            for q in pos + 1..m {
                idx[q] = idx[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Searches `host` for a `K_m` minor. A found decomposition always passes
/// [`verify_minor`](super::verify_minor); a non-exhaustive miss is not
/// evidence that the minor is absent.
pub fn find_clique_minor(host: &Graph, m: usize, opts: SearchOptions) -> Result<SearchOutcome, MinorError> {
    if m == 0 {
        return Err(MinorError::ZeroOrder);
    }
    let n = host.num_vertices();
    if n < m {
        return Ok(not_found(0, true, format!("host has {n} < {m} vertices")));
    }
    if m == 1 {
        return Ok(SearchOutcome::Found {
            decomposition: BranchDecomposition::clique(vec![VertexSet::singleton(0)]),
            expansions: 0,
        });
    }
    if m == 2 {
        return Ok(match host.edges().first() {
            Some(&(u, v)) => SearchOutcome::Found {
                decomposition: BranchDecomposition::clique(vec![VertexSet::singleton(u), VertexSet::singleton(v)]),
                expansions: 0,
            },
            None => not_found(0, true, "host has no edges"),
        });
    }

    let alive = two_core(host);
    let live = alive.iter().filter(|&&a| a).count();
    let live_edges = host.edges().iter().filter(|&&(u, v)| alive[u] && alive[v]).count();
    if live < m || live_edges < m * (m - 1) / 2 {
        return Ok(not_found(
            0,
            true,
            format!("2-core has {live} vertices and {live_edges} edges"),
        ));
    }
    if m >= 4 && series_parallel_reducible(host, &alive) {
        return Ok(not_found(
            0,
            true,
            "host reduces away by series-parallel steps, so it has no K4 minor",
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let zobrist: Vec<u128> = (0..n * m).map(|_| rng.gen()).collect();
    let mut search = Search::new(host, &alive, m, &zobrist, opts.budget);

    let found = |s: &Search| {
        let decomposition = s.decomposition();
        debug_assert!(super::verify_minor(host, &decomposition).pass);
        SearchOutcome::Found {
            decomposition,
            expansions: s.expansions,
        }
    };

    // quick pass with spread seeds
    let seeds = separated_seeds(host, &alive, m, &mut rng);
    search.budget = (opts.budget / 4).max(1).min(opts.budget);
    match search.run(&seeds, false) {
        Step::Found => return Ok(found(&search)),
        Step::Exhausted | Step::OutOfBudget => {}
    }
    search.budget = opts.budget;
    search.visited.clear();

    let pool: Vec<VertexId> = host.vertices().filter(|&v| alive[v]).collect();
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        let seeds: Vec<VertexId> = idx.iter().map(|&i| pool[i]).collect();
        match search.run(&seeds, true) {
            Step::Found => return Ok(found(&search)),
            Step::OutOfBudget => return Ok(not_found(search.expansions.min(opts.budget), false, "budget exhausted")),
            Step::Exhausted => {}
        }
        if !next_tuple(&mut idx, pool.len()) {
            return Ok(not_found(search.expansions, true, "search space exhausted"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::verify_minor;

    #[test]
    fn grid_has_k4() {
        let g = Graph::grid(3, 3);
        let out = find_clique_minor(&g, 4, SearchOptions::default()).unwrap();
        let bd = out.decomposition().expect("K4 is a minor of the 3x3 grid");
        assert!(verify_minor(&g, bd).pass);
        assert!(matches!(
            find_clique_minor(&g, 5, SearchOptions::default()).unwrap(),
            SearchOutcome::NotFound { exhaustive: true, .. }
        ));
    }

    #[test]
    fn trees_and_cycles() {
        let star = Graph::star(6);
        assert!(matches!(
            find_clique_minor(&star, 3, SearchOptions { budget: 1, seed: 3 }).unwrap(),
            SearchOutcome::NotFound { exhaustive: true, .. }
        ));
        let c = Graph::cycle(7);
        assert!(find_clique_minor(&c, 3, SearchOptions::default())
            .unwrap()
            .decomposition()
            .is_some());
        assert!(matches!(
            find_clique_minor(&c, 4, SearchOptions::default()).unwrap(),
            SearchOutcome::NotFound { exhaustive: true, .. }
        ));
        assert_eq!(
            find_clique_minor(&c, 0, SearchOptions::default()),
            Err(MinorError::ZeroOrder)
        );
    }

    #[test]
    fn small_orders() {
        let g = Graph::path(3);
        let k1 = find_clique_minor(&g, 1, SearchOptions::default()).unwrap();
        assert_eq!(k1.decomposition().unwrap().sets, vec![VertexSet::singleton(0)]);
        assert!(find_clique_minor(&g, 2, SearchOptions::default())
            .unwrap()
            .decomposition()
            .is_some());
        let empty = Graph::from_edges(3, []).unwrap();
        assert!(find_clique_minor(&empty, 2, SearchOptions::default())
            .unwrap()
            .decomposition()
            .is_none());
    }

    #[test]
    fn deterministic_under_seed() {
        let g = Graph::grid(5, 5);
        let opts = SearchOptions {
            budget: 100_000,
            seed: 9,
        };
        assert_eq!(
            find_clique_minor(&g, 4, opts).unwrap(),
            find_clique_minor(&g, 4, opts).unwrap()
        );
    }

    #[test]
    fn tuples_enumerate_all_subsets() {
        let mut idx = vec![0, 1];
        let mut count = 1;
        while next_tuple(&mut idx, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
    }
}
