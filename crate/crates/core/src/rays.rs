//! Clique minors from disjoint rays. Given `m` disjoint rays in
//! `Cay(G, S0)`, the rays are trimmed and joined pairwise until they form
//! the branch sets of a `K_m` minor of `Cay(G, S)` with
//! `S = S0 ∪ S0S0 ∪ S0S0S0`.
//!
//! Every modification keeps a ray's surviving vertices within three steps
//! of each other along the original ray, which is what makes the trimmed
//! set connected over `S`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{bfs_distances, is_connected_subset, vertex_disjoint_paths, Graph, GraphError, VertexId, VertexSet};
use crate::groups::{split_top_level, CayleyBall, Element, GroupError, GroupKind, GroupSpec, DEFAULT_BALL_CAP};
use crate::minors::{verify_minor, BranchDecomposition, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RaysError {
    #[error("at least one ray is required")]
    NoRays,
    #[error("no built-in ray source for `{0}`; supply a ray file")]
    Unsupported(String),
    #[error("radius {radius} is too small: {reason}; try radius {suggested}")]
    InsufficientRadius {
        radius: usize,
        suggested: usize,
        reason: String,
    },
    #[error("sphere of radius {r_core} has {size} vertices, need more than {m}")]
    SphereTooSmall { r_core: usize, size: usize, m: usize },
    #[error("only {found} disjoint paths reach length {level}; separator {separator:?}")]
    TooFewPaths {
        level: usize,
        found: usize,
        separator: VertexSet,
    },
    #[error("invalid ray: {0}")]
    BadRay(String),
    #[error("cannot connect rays {i} and {j}: {reason}")]
    BadPair { i: usize, j: usize, reason: String },
    #[error("path does not meet the ray")]
    NoIntersection,
    #[error("detour unavailable: {0}")]
    Detour(String),
    #[error("complement of the exclusion ball (radius {r_b}) is disconnected")]
    RegionDisconnected { r_b: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

type Result<T> = std::result::Result<T, RaysError>;

/// A finite ray prefix, origin first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray {
    pub vertices: Vec<VertexId>,
}

impl Ray {
    pub fn new(vertices: Vec<VertexId>) -> Self {
        Ray { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Nonempty, simple, and consecutive vertices adjacent in `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(RaysError::BadRay("empty ray".into()));
        }
        for &v in &self.vertices {
            g.check_vertex(v)?;
        }
        let distinct: VertexSet = self.vertices.iter().copied().collect();
        if distinct.len() != self.vertices.len() {
            return Err(RaysError::BadRay("ray repeats a vertex".into()));
        }
        if let Some(w) = self.vertices.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(RaysError::BadRay(format!("{} and {} are not adjacent", w[0], w[1])));
        }
        Ok(())
    }
}

fn check_rays(g: &Graph, rays: &[Ray]) -> Result<()> {
    let mut owner = vec![usize::MAX; g.num_vertices()];
    for (k, ray) in rays.iter().enumerate() {
        ray.validate(g)?;
        for &v in &ray.vertices {
            if owner[v] != usize::MAX {
                return Err(RaysError::BadRay(format!("rays {} and {k} share vertex {v}", owner[v])));
            }
            owner[v] = k;
        }
    }
    Ok(())
}

/// Fewest vertices per ray the builder asks for up front: one per pair
/// connection plus a margin of two.
pub fn min_ray_len(m: usize) -> usize {
    m * (m - 1) / 2 + 2
}

/// Vertical rays `x = i`, `y = 1, 2, ...` for `i = 1..=m` in a `Z^2` ball
/// whose generators include `(0,1)`, truncated at the ball boundary.
pub fn standard_rays(ball: &CayleyBall, m: usize) -> Result<Vec<Ray>> {
    if m == 0 {
        return Err(RaysError::NoRays);
    }
    let spec = ball.spec();
    let up = Element::Coords(vec![0, 1]);
    if *spec.kind() != GroupKind::FreeAbelian(2) || !spec.gens().contains(&up) {
        return Err(RaysError::Unsupported(spec.to_string()));
    }
    let rays: Vec<Ray> = (1..=m as i64)
        .map(|x| {
            let vertices = (1..)
                .map_while(|y| ball.vertex_of(&Element::Coords(vec![x, y])))
                .collect();
            Ray::new(vertices)
        })
        .collect();
    let need = min_ray_len(m);
    let shortest = rays.iter().map(Ray::len).min().unwrap_or(0);
    if shortest < need {
        return Err(RaysError::InsufficientRadius {
            radius: ball.radius(),
            suggested: ball.radius() + need - shortest,
            reason: format!("shortest ray has {shortest} vertices, need {need}"),
        });
    }
    Ok(rays)
}

/// Rays found by max-flow towards successively larger spheres.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MengerRays {
    /// The family reaching the outermost sphere, one ray per start vertex.
    pub rays: Vec<Ray>,
    /// Per ray, the prefix length it shares with the family one level in.
    pub stable_prefix: Vec<usize>,
    pub levels: usize,
}

/// `m` disjoint paths from the sphere of radius `r_core` around vertex 0 to
/// each sphere of radius `L > r_core`, for every `L` up to the boundary.
/// The start set is the `m` smallest ids on the inner sphere.
pub fn menger_rays(host: &Graph, m: usize, r_core: usize) -> Result<MengerRays> {
    if m == 0 {
        return Err(RaysError::NoRays);
    }
    let dist = bfs_distances(host, 0)?;
    let sphere = |r: usize| -> VertexSet { host.vertices().filter(|&v| dist.get(v) == Some(r)).collect() };
    let outer = host.vertices().filter_map(|v| dist.get(v)).max().unwrap_or(0);
    let inner = sphere(r_core);
    if inner.len() <= m {
        return Err(RaysError::SphereTooSmall {
            r_core,
            size: inner.len(),
            m,
        });
    }
    if outer <= r_core {
        return Err(RaysError::InsufficientRadius {
            radius: outer,
            suggested: r_core + 1,
            reason: "no vertex lies beyond the inner sphere".into(),
        });
    }
    let a: VertexSet = inner.iter().take(m).collect();

    let mut prev: Option<Vec<Vec<VertexId>>> = None;
    let mut stable = Vec::new();
    for level in r_core + 1..=outer {
        let b = sphere(level);
        if b.len() < m && m > 1 {
            return Err(RaysError::TooFewPaths {
                level,
                found: b.len(),
                separator: b,
            });
        }
        let found = vertex_disjoint_paths(host, &a, &b, m)?;
        if found.paths.len() < m {
            return Err(RaysError::TooFewPaths {
                level,
                found: found.paths.len(),
                separator: found.separator.unwrap_or_default(),
            });
        }
        let mut family = found.paths;
        family.sort_by_key(|p| p[0]);
        stable = match &prev {
            Some(old) => old
                .iter()
                .zip(&family)
                .map(|(x, y)| x.iter().zip(y).take_while(|(p, q)| p == q).count())
                .collect(),
            None => family.iter().map(Vec::len).collect(),
        };
        prev = Some(family);
    }
    let rays = prev.unwrap_or_default().into_iter().map(Ray::new).collect();
    Ok(MengerRays {
        rays,
        stable_prefix: stable,
        levels: outer - r_core,
    })
}

/// Parses one ray per line, each a comma-separated list of normal-form
/// words. Blank lines and lines starting with `#` are skipped.
pub fn parse_ray_file(spec: &GroupSpec, text: &str) -> Result<Vec<Vec<Element>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            split_top_level(line)
                .into_iter()
                .map(|w| spec.parse_element(w).map_err(RaysError::from))
                .collect()
        })
        .collect()
}

/// Maps element rays onto ball vertices, cutting each at its first element
/// outside the ball.
pub fn rays_in_ball(ball: &CayleyBall, words: &[Vec<Element>]) -> Vec<Ray> {
    words
        .iter()
        .map(|w| Ray::new(w.iter().map_while(|e| ball.vertex_of(e)).collect()))
        .collect()
}

/// A ray after trimming: the original ray plus which of its vertices
/// survive. Surviving vertices are always a subset of the original ray.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModifiedRay {
    ray: Ray,
    alive: Vec<bool>,
}

impl ModifiedRay {
    pub fn new(ray: Ray) -> Self {
        let alive = vec![true; ray.len()];
        ModifiedRay { ray, alive }
    }

    pub fn ray(&self) -> &Ray {
        &self.ray
    }

    pub fn is_alive(&self, index: usize) -> bool {
        self.alive.get(index).copied().unwrap_or(false)
    }

    /// Position on the original ray of a surviving vertex.
    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.ray
            .vertices
            .iter()
            .position(|&x| x == v)
            .filter(|&i| self.alive[i])
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index_of(v).is_some()
    }

    pub fn members(&self) -> VertexSet {
        self.alive_vertices().collect()
    }

    pub fn alive_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.ray
            .vertices
            .iter()
            .zip(&self.alive)
            .filter(|(_, &a)| a)
            .map(|(&v, _)| v)
    }

    fn without(&self, indices: &[usize]) -> ModifiedRay {
        let mut out = self.clone();
        for &i in indices {
            out.alive[i] = false;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalCase {
    /// The path meets the ray once; that vertex is dropped.
    Single,
    /// The path meets two consecutive ray vertices; both are dropped.
    Adjacent,
    /// The path is rerouted along the ray through `l1`; the ray keeps `l2`.
    Detour,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub case: RemovalCase,
    /// First and last ray positions involved (`s <= t`).
    pub s: usize,
    pub t: usize,
    pub path: Vec<VertexId>,
    pub set: ModifiedRay,
    /// Ray positions of the detour taken by the new path.
    pub l1: Vec<usize>,
    /// Ray positions from `s+1` to `t+1` the trimmed ray keeps.
    pub l2: Vec<usize>,
}

/// Ray positions from `a` to `b` in steps of 2, with one step of 3 first
/// when the distance is odd. Its complement inside `[min+1, max+1]` then
/// also advances by at most 2.
pub fn detour_indices(a: usize, b: usize) -> Vec<usize> {
    let (lo, hi) = (a.min(b), a.max(b));
    let mut out = vec![lo];
    let mut x = lo;
    if (hi - lo) % 2 == 1 {
        x = if hi - lo == 1 { hi } else { lo + 3 };
        out.push(x);
    }
    while x < hi {
        x += 2;
        out.push(x);
    }
    if a > b {
        out.reverse();
    }
    out
}

/// Clears the intersection of `path` with `set`. `s` and `t` are the
/// smallest and largest ray positions the path touches. For `t <= s+1` the
/// touched vertices leave the set and the path stays. Otherwise the stretch
/// of the path between its first and last contact with the ray is replaced
/// by a detour along the ray, and the detour's vertices leave the set.
/// Fails when the result would not be a path of `host` or the trimmed set
/// would not be connected in `host`.
pub fn remove_intersection(host: &Graph, path: &[VertexId], set: &ModifiedRay) -> Result<Removal> {
    let contacts: Vec<(usize, usize)> = path
        .iter()
        .enumerate()
        .filter_map(|(p, &v)| set.index_of(v).map(|i| (p, i)))
        .collect();
    let (Some(&(pa, ia)), Some(&(pb, ib))) = (contacts.first(), contacts.last()) else {
        return Err(RaysError::NoIntersection);
    };
    let s = contacts.iter().map(|c| c.1).min().unwrap();
    let t = contacts.iter().map(|c| c.1).max().unwrap();

    let removal = if t <= s + 1 {
        let dropped: Vec<usize> = if s == t { vec![s] } else { vec![s, t] };
        Removal {
            case: if s == t {
                RemovalCase::Single
            } else {
                RemovalCase::Adjacent
            },
            s,
            t,
            path: path.to_vec(),
            set: set.without(&dropped),
            l1: Vec::new(),
            l2: Vec::new(),
        }
    } else {
        let l1 = detour_indices(ia, ib);
        let (lo, hi) = (ia.min(ib), ia.max(ib));
        if let Some(&x) = l1.iter().find(|&&x| !set.is_alive(x)) {
            return Err(RaysError::Detour(format!("ray position {x} was already removed")));
        }
        if !set.is_alive(hi + 1) {
            return Err(RaysError::Detour(format!("ray is cut before position {}", hi + 1)));
        }
        let ray = &set.ray().vertices;
        if let Some(w) = l1.windows(2).find(|w| !host.has_edge(ray[w[0]], ray[w[1]])) {
            return Err(RaysError::Detour(format!(
                "no edge between ray positions {} and {}",
                w[0], w[1]
            )));
        }
        let mut new_path = path[..pa].to_vec();
        new_path.extend(l1.iter().map(|&x| ray[x]));
        new_path.extend_from_slice(&path[pb + 1..]);
        let l2 = (lo + 1..=hi + 1)
            .filter(|x| !l1.contains(x) && set.is_alive(*x))
            .collect();
        Removal {
            case: RemovalCase::Detour,
            s: lo,
            t: hi,
            path: new_path,
            set: set.without(&l1),
            l1,
            l2,
        }
    };
    if !removal.set.alive.iter().any(|&a| a) {
        return Err(RaysError::Detour("the ray would lose every vertex".into()));
    }
    if !is_connected_subset(host, &removal.set.members())? {
        return Err(RaysError::Detour(format!(
            "removing positions {}..={} disconnects the ray",
            removal.s, removal.t
        )));
    }
    Ok(removal)
}

/// An established connection between two branch sets: a host path whose
/// first vertex lies in set `pair.0` and last vertex in set `pair.1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connection {
    pub pair: (usize, usize),
    pub path: Vec<VertexId>,
}

impl Connection {
    pub fn interior(&self) -> &[VertexId] {
        let n = self.path.len();
        if n <= 2 {
            &[]
        } else {
            &self.path[1..n - 1]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalLog {
    pub ray: usize,
    pub case: RemovalCase,
    pub s: usize,
    pub t: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairLog {
    pub pair: (usize, usize),
    pub r_b_before: usize,
    pub r_b_after: usize,
    /// Vertex counts of the path as found and after all removals.
    pub path_found: usize,
    pub path_final: usize,
    pub removals: Vec<RemovalLog>,
}

/// Trimmed rays, connections so far, and the exclusion radius: every
/// vertex used by earlier work has length at most `r_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionState {
    pub sets: Vec<ModifiedRay>,
    pub connections: Vec<Connection>,
    pub r_b: usize,
}

impl ConnectionState {
    pub fn new(rays: Vec<Ray>) -> Self {
        ConnectionState {
            sets: rays.into_iter().map(ModifiedRay::new).collect(),
            connections: Vec::new(),
            r_b: 0,
        }
    }

    pub fn is_connected(&self, i: usize, j: usize) -> bool {
        self.connections.iter().any(|c| c.pair == (i, j) || c.pair == (j, i))
    }

    fn owner_map(&self, n: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; n];
        for (k, set) in self.sets.iter().enumerate() {
            for v in set.alive_vertices() {
                owner[v] = Some(k);
            }
        }
        owner
    }

    /// Joins sets `i` and `j` by a path that avoids the exclusion ball,
    /// clearing the path's intersections with the other sets, then grows the
    /// exclusion ball past everything touched. `host` must carry the edges
    /// of the enlarged generating set.
    pub fn connect_pair(&mut self, host: &CayleyBall, i: usize, j: usize) -> Result<PairLog> {
        let bad = |reason: &str| RaysError::BadPair {
            i,
            j,
            reason: reason.into(),
        };
        if i == j {
            return Err(bad("a set is not connected to itself"));
        }
        if i >= self.sets.len() || j >= self.sets.len() {
            return Err(bad("no such ray"));
        }
        if self.is_connected(i, j) {
            return Err(bad("already connected"));
        }
        let g = host.graph();
        let n = g.num_vertices();
        let short = |reason: String| RaysError::InsufficientRadius {
            radius: host.radius(),
            suggested: 2 * host.radius().max(1),
            reason,
        };
        let r_b = self.r_b;
        let region: Vec<bool> = (0..n).map(|v| host.length(v) > r_b).collect();
        let region_set: VertexSet = (0..n).filter(|&v| region[v]).collect();
        if region_set.is_empty() {
            return Err(short(format!(
                "nothing lies outside the exclusion ball of radius {r_b}"
            )));
        }
        if !is_connected_subset(g, &region_set)? {
            return Err(RaysError::RegionDisconnected { r_b });
        }

        let found = self.route(g, &region, i, j).ok_or_else(|| {
            short(format!(
                "rays {i} and {j} do not meet a common region beyond radius {r_b}"
            ))
        })?;
        let mut path = found.clone();
        let mut removals = Vec::new();
        let mut touched = path.clone();
        loop {
            let owner = self.owner_map(n);
            let met = |p: &[VertexId]| -> Vec<usize> {
                let mut ks: Vec<usize> = p
                    .iter()
                    .filter_map(|&v| owner[v])
                    .filter(|&k| k != i && k != j)
                    .collect();
                ks.sort_unstable();
                ks.dedup();
                ks
            };
            let before = met(&path);
            let Some(k) = path.iter().filter_map(|&v| owner[v]).find(|&k| k != i && k != j) else {
                break;
            };
            let r = remove_intersection(g, &path, &self.sets[k])?;
            if let Some(&v) = r.path.iter().find(|&&v| !region[v]) {
                return Err(RaysError::Detour(format!(
                    "detour through ray {k} enters the exclusion ball at vertex {v}"
                )));
            }
            let ray = &self.sets[k].ray().vertices;
            let lo = r.s.saturating_sub(1);
            let hi = (r.t + 1).min(ray.len() - 1);
            touched.extend_from_slice(&ray[lo..=hi]);
            self.sets[k] = r.set.clone();
            let owner_after = self.owner_map(n);
            let after: Vec<usize> = {
                let mut ks: Vec<usize> = r
                    .path
                    .iter()
                    .filter_map(|&v| owner_after[v])
                    .filter(|&x| x != i && x != j)
                    .collect();
                ks.sort_unstable();
                ks.dedup();
                ks
            };
            if after.contains(&k) || after.iter().any(|x| !before.contains(x)) {
                return Err(RaysError::Invariant(format!(
                    "clearing ray {k} left path meeting {after:?} (was {before:?})"
                )));
            }
            removals.push(RemovalLog {
                ray: k,
                case: r.case,
                s: r.s,
                t: r.t,
            });
            path = r.path;
            touched.extend_from_slice(&path);
            if removals.len() > self.sets.len() {
                return Err(RaysError::Invariant("removal loop did not settle".into()));
            }
        }

        let reach = touched.iter().map(|&v| host.length(v)).max().unwrap_or(0);
        self.r_b = reach.max(r_b + 1);
        let log = PairLog {
            pair: (i, j),
            r_b_before: r_b,
            r_b_after: self.r_b,
            path_found: found.len(),
            path_final: path.len(),
            removals,
        };
        self.connections.push(Connection { pair: (i, j), path });
        self.check_invariants(g)?;
        Ok(log)
    }

    /// Breadth-first search from set `i` to set `j` inside `region`.
    /// Sources and neighbors are visited in increasing id order.
    fn route(&self, g: &Graph, region: &[bool], i: usize, j: usize) -> Option<Vec<VertexId>> {
        let n = g.num_vertices();
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        let mut sources: Vec<VertexId> = self.sets[i].alive_vertices().filter(|&v| region[v]).collect();
        sources.sort_unstable();
        for &v in &sources {
            parent[v] = v;
            queue.push_back(v);
        }
        let target: Vec<bool> = {
            let mut t = vec![false; n];
            for v in self.sets[j].alive_vertices() {
                t[v] = region[v];
            }
            t
        };
        let mut end = None;
        'search: while let Some(u) = queue.pop_front() {
            for w in g.neighbors(u) {
                if region[w] && parent[w] == usize::MAX {
                    parent[w] = u;
                    if target[w] {
                        end = Some(w);
                        break 'search;
                    }
                    queue.push_back(w);
                }
            }
        }
        let mut v = end?;
        let mut path = vec![v];
        while parent[v] != v {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        Some(path)
    }

    /// Sets pairwise disjoint and connected; every connection still runs
    /// from its first set to its second with an interior that avoids all
    /// sets and all other connections.
    pub fn check_invariants(&self, g: &Graph) -> Result<()> {
        let n = g.num_vertices();
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (k, set) in self.sets.iter().enumerate() {
            for v in set.alive_vertices() {
                if let Some(other) = owner[v] {
                    return Err(RaysError::Invariant(format!("sets {other} and {k} share {v}")));
                }
                owner[v] = Some(k);
            }
            if !is_connected_subset(g, &set.members())? {
                return Err(RaysError::Invariant(format!("set {k} is disconnected")));
            }
        }
        let mut used = vec![false; n];
        for c in &self.connections {
            let (first, last) = (c.path[0], *c.path.last().unwrap());
            if owner[first] != Some(c.pair.0) || owner[last] != Some(c.pair.1) {
                return Err(RaysError::Invariant(format!(
                    "connection {:?} lost an endpoint",
                    c.pair
                )));
            }
            if c.path.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
                return Err(RaysError::Invariant(format!("connection {:?} is not a path", c.pair)));
            }
            for &v in c.interior() {
                if owner[v].is_some() || used[v] {
                    return Err(RaysError::Invariant(format!(
                        "connection {:?} crosses vertex {v}",
                        c.pair
                    )));
                }
                used[v] = true;
            }
        }
        Ok(())
    }

    /// Each set together with the interiors of the connections it opened.
    pub fn branch_sets(&self) -> Vec<VertexSet> {
        self.sets
            .iter()
            .enumerate()
            .map(|(k, set)| {
                let mut vs: Vec<VertexId> = set.alive_vertices().collect();
                for c in self.connections.iter().filter(|c| c.pair.0 == k) {
                    vs.extend_from_slice(c.interior());
                }
                vs.into_iter().collect()
            })
            .collect()
    }
}

/// Where the builder gets its rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RaySource {
    /// Vertical rays in `Z^2`.
    Standard,
    /// Max-flow rays leaving the sphere of the given radius.
    Menger { r_core: usize },
    /// Explicit rays as element lists, cut at the ball boundary.
    Words(Vec<Vec<Element>>),
}

impl RaySource {
    fn name(&self) -> String {
        match self {
            RaySource::Standard => "standard".into(),
            RaySource::Menger { r_core } => format!("menger(r_core={r_core})"),
            RaySource::Words(w) => format!("file({} rays)", w.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildLog {
    pub spec: String,
    pub enlarged_gens: usize,
    pub m: usize,
    pub radius: usize,
    pub source: String,
    pub ray_lengths: Vec<usize>,
    pub connections: usize,
    pub pairs: Vec<PairLog>,
    /// Largest vertex length used by any branch set.
    pub radius_used: usize,
    pub final_r_b: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct RayBuild {
    /// The `S0` ball with edges of `S0 ∪ S0S0 ∪ S0S0S0`.
    pub host: CayleyBall,
    pub decomposition: BranchDecomposition,
    pub state: ConnectionState,
    pub log: BuildLog,
}

/// Runs the pair connections `(0,1), (0,2), ..., (m-2,m-1)` and checks the
/// resulting `K_m` decomposition on the enlarged-generator host.
pub fn build_minor_from_rays(spec: &GroupSpec, m: usize, radius: usize, source: &RaySource) -> Result<RayBuild> {
    if m == 0 {
        return Err(RaysError::NoRays);
    }
    let enlarged = spec.enlarged();
    let host = CayleyBall::with_edge_gens(spec, radius, enlarged.gens(), DEFAULT_BALL_CAP)?;
    let plain = CayleyBall::new(spec, radius)?;
    let rays = match source {
        RaySource::Standard => standard_rays(&plain, m)?,
        RaySource::Menger { r_core } => menger_rays(plain.graph(), m, *r_core)?.rays,
        RaySource::Words(words) => {
            if words.len() < m {
                return Err(RaysError::BadRay(format!("{} rays given, {m} needed", words.len())));
            }
            rays_in_ball(&plain, &words[..m])
        }
    };
    check_rays(plain.graph(), &rays)?;
    let ray_lengths = rays.iter().map(Ray::len).collect();

    let mut state = ConnectionState::new(rays);
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            pairs.push(state.connect_pair(&host, i, j)?);
        }
    }
    let decomposition = BranchDecomposition::clique(state.branch_sets());
    let verdict = verify_minor(host.graph(), &decomposition);
    if !verdict.pass {
        return Err(RaysError::Invariant(format!(
            "assembled sets fail verification: {}",
            verdict.failure().unwrap_or_default()
        )));
    }
    let radius_used = decomposition
        .sets
        .iter()
        .flat_map(|s| s.iter())
        .map(|v| host.length(v))
        .max()
        .unwrap_or(0);
    let log = BuildLog {
        spec: spec.to_string(),
        enlarged_gens: enlarged.gens().len(),
        m,
        radius,
        source: source.name(),
        ray_lengths,
        connections: state.connections.len(),
        pairs,
        radius_used,
        final_r_b: state.r_b,
        verdict,
    };
    Ok(RayBuild {
        host,
        decomposition,
        state,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> GroupSpec {
        "Z^2 | gens=(1,0),(0,1),sym".parse().unwrap()
    }

    fn z2_host(radius: usize) -> CayleyBall {
        let spec = z2();
        CayleyBall::with_edge_gens(&spec, radius, spec.enlarged().gens(), DEFAULT_BALL_CAP).unwrap()
    }

    fn at(ball: &CayleyBall, x: i64, y: i64) -> VertexId {
        ball.vertex_of(&Element::Coords(vec![x, y])).unwrap()
    }

    #[test]
    fn vertical_rays() {
        let ball = CayleyBall::new(&z2(), 10).unwrap();
        let rays = standard_rays(&ball, 2).unwrap();
        assert_eq!(rays[0].vertices[0], at(&ball, 1, 1));
        assert_eq!(rays[1].vertices[0], at(&ball, 2, 1));
        assert_eq!(rays[1].len(), 8);
        check_rays(ball.graph(), &rays).unwrap();

        let one = standard_rays(&ball, 1).unwrap();
        for (k, &v) in one[0].vertices.iter().enumerate() {
            assert_eq!(ball.length(v), k + 2);
        }
    }

    #[test]
    fn small_ball_suggests_radius() {
        let ball = CayleyBall::new(&z2(), 3).unwrap();
        match standard_rays(&ball, 2) {
            Err(RaysError::InsufficientRadius { suggested, .. }) => {
                assert!(standard_rays(&CayleyBall::new(&z2(), suggested).unwrap(), 2).is_ok());
            }
            other => panic!("{other:?}"),
        }
        let wide = CayleyBall::new(&z2(), 6).unwrap();
        assert!(matches!(
            standard_rays(&wide, 7),
            Err(RaysError::InsufficientRadius { .. })
        ));
        let f2 = GroupSpec::standard(GroupKind::Free(2));
        let tree = CayleyBall::new(&f2, 3).unwrap();
        assert!(matches!(standard_rays(&tree, 2), Err(RaysError::Unsupported(_))));
    }

    #[test]
    fn detour_parity() {
        assert_eq!(detour_indices(2, 6), vec![2, 4, 6]);
        assert_eq!(detour_indices(2, 7), vec![2, 5, 7]);
        assert_eq!(detour_indices(7, 2), vec![7, 5, 2]);
        assert_eq!(detour_indices(4, 5), vec![4, 5]);
        for lo in 0..4 {
            for hi in lo + 2..lo + 12 {
                let l1 = detour_indices(lo, hi);
                let l2: Vec<usize> = (lo + 1..=hi + 1).filter(|x| !l1.contains(x)).collect();
                assert!(l1.windows(2).all(|w| (2..=3).contains(&(w[1] - w[0]))));
                assert!(l2.windows(2).all(|w| (1..=3).contains(&(w[1] - w[0]))));
                assert_eq!(l2.first(), Some(&(lo + 1)));
                assert_eq!(l2.last(), Some(&(hi + 1)));
            }
        }
    }

    fn column(host: &CayleyBall, x: i64, len: i64) -> ModifiedRay {
        ModifiedRay::new(Ray::new((1..=len).map(|y| at(host, x, y)).collect()))
    }

    #[test]
    fn single_and_adjacent_crossings() {
        let host = z2_host(12);
        let ray = column(&host, 3, 8);
        let p: Vec<VertexId> = (1..=5).map(|x| at(&host, x, 4)).collect();
        let r = remove_intersection(host.graph(), &p, &ray).unwrap();
        assert_eq!((r.case, r.s, r.t), (RemovalCase::Single, 3, 3));
        assert_eq!(r.path, p);
        assert!(!r.set.contains(at(&host, 3, 4)));
        assert!(r.set.contains(at(&host, 3, 5)));

        let p = vec![at(&host, 2, 4), at(&host, 3, 4), at(&host, 3, 5), at(&host, 4, 5)];
        let r = remove_intersection(host.graph(), &p, &ray).unwrap();
        assert_eq!((r.case, r.s, r.t), (RemovalCase::Adjacent, 3, 4));
        assert_eq!(r.set.members().len(), 6);
        assert!(is_connected_subset(host.graph(), &r.set.members()).unwrap());

        let far = vec![at(&host, 5, 1), at(&host, 5, 2)];
        assert_eq!(
            remove_intersection(host.graph(), &far, &ray),
            Err(RaysError::NoIntersection)
        );
    }

    #[test]
    fn long_crossing_reroutes_along_the_ray() {
        let host = z2_host(14);
        let ray = column(&host, 3, 10);
        // Enters the column at y=2, wanders right, re-enters at y=5.
        let p = vec![
            at(&host, 2, 2),
            at(&host, 3, 2),
            at(&host, 4, 2),
            at(&host, 4, 3),
            at(&host, 4, 4),
            at(&host, 3, 5),
            at(&host, 2, 5),
        ];
        let r = remove_intersection(host.graph(), &p, &ray).unwrap();
        assert_eq!((r.case, r.s, r.t), (RemovalCase::Detour, 1, 4));
        assert_eq!(r.l1, vec![1, 4]);
        assert_eq!(r.l2, vec![2, 3, 5]);
        assert_eq!(
            r.path,
            vec![at(&host, 2, 2), at(&host, 3, 2), at(&host, 3, 5), at(&host, 2, 5)]
        );
        assert!(r.path.windows(2).all(|w| host.graph().has_edge(w[0], w[1])));
        assert!(r.path.iter().all(|&v| !r.set.contains(v)));
        assert!(is_connected_subset(host.graph(), &r.set.members()).unwrap());

        // Contacts in path order sit at ray positions 4, 1, 6. The detour
        // joins the first and last contact and cuts out the stray one.
        let p = vec![
            at(&host, 4, 5),
            at(&host, 3, 5),
            at(&host, 2, 4),
            at(&host, 3, 2),
            at(&host, 2, 3),
            at(&host, 2, 6),
            at(&host, 3, 7),
            at(&host, 4, 7),
        ];
        let r = remove_intersection(host.graph(), &p, &ray).unwrap();
        assert_eq!(r.l1, vec![4, 6]);
        assert_eq!(
            r.path,
            vec![at(&host, 4, 5), at(&host, 3, 5), at(&host, 3, 7), at(&host, 4, 7)]
        );
        assert!(r.path.iter().all(|&v| !r.set.contains(v)));
        assert!(is_connected_subset(host.graph(), &r.set.members()).unwrap());
    }

    #[test]
    fn truncated_ray_blocks_the_detour() {
        let host = z2_host(12);
        let ray = column(&host, 3, 5);
        let p = vec![
            at(&host, 2, 3),
            at(&host, 3, 3),
            at(&host, 4, 4),
            at(&host, 3, 5),
            at(&host, 2, 5),
        ];
        assert!(matches!(
            remove_intersection(host.graph(), &p, &ray),
            Err(RaysError::Detour(_))
        ));
    }

    #[test]
    fn pair_connections_grow_the_exclusion_ball() {
        let host = z2_host(15);
        let plain = CayleyBall::new(&z2(), 15).unwrap();
        let mut state = ConnectionState::new(standard_rays(&plain, 3).unwrap());
        let first = state.connect_pair(&host, 0, 1).unwrap();
        assert_eq!(first.path_final, 2);
        assert!(first.removals.is_empty());
        let kept = state.connections[0].clone();
        let second = state.connect_pair(&host, 0, 2).unwrap();
        assert!(second.r_b_after > first.r_b_after);
        assert!(state.connections[1]
            .path
            .iter()
            .all(|&v| host.length(v) > first.r_b_after));
        assert_eq!(state.connections[0], kept);
        assert!(matches!(
            state.connect_pair(&host, 1, 1),
            Err(RaysError::BadPair { .. })
        ));
        assert!(matches!(
            state.connect_pair(&host, 1, 0),
            Err(RaysError::BadPair { .. })
        ));
    }

    #[test]
    fn builds_small_cliques() {
        let spec = z2();
        for (m, radius) in [(1, 6), (2, 10), (3, 40), (4, 60)] {
            let b = build_minor_from_rays(&spec, m, radius, &RaySource::Standard).unwrap();
            assert!(b.log.verdict.pass);
            assert_eq!(b.log.connections, m * (m - 1) / 2);
            let r: Vec<usize> = b.log.pairs.iter().map(|p| p.r_b_after).collect();
            assert!(r.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn crowded_columns_need_removals() {
        // With six columns some pair paths must cross a column in between.
        let b = build_minor_from_rays(&z2(), 6, 60, &RaySource::Standard).unwrap();
        assert!(b.log.verdict.pass);
        assert_eq!(b.log.connections, 15);
    }

    #[test]
    fn menger_family() {
        let ball = CayleyBall::new(&z2(), 20).unwrap();
        let mr = menger_rays(ball.graph(), 4, 2).unwrap();
        assert_eq!(mr.rays.len(), 4);
        check_rays(ball.graph(), &mr.rays).unwrap();
        for ray in &mr.rays {
            assert_eq!(ball.length(ray.vertices[0]), 2);
            assert_eq!(ball.length(*ray.vertices.last().unwrap()), 20);
        }

        let one = menger_rays(ball.graph(), 1, 2).unwrap();
        assert_eq!(one.rays[0].len(), 19);
    }

    #[test]
    fn menger_reports_a_separator() {
        // Two stars sharing their center: root 0, spokes 1..=3, center 4, outer 5..=7.
        let mut edges = vec![];
        for x in 1..=3 {
            edges.push((0, x));
            edges.push((x, 4));
        }
        for y in 5..=7 {
            edges.push((4, y));
        }
        let g = Graph::from_edges(8, edges).unwrap();
        match menger_rays(&g, 2, 1) {
            Err(RaysError::TooFewPaths { separator, .. }) => {
                assert_eq!(separator, VertexSet::singleton(4));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ray_file_round_trip() {
        let spec = z2();
        let text = "# two columns\n(1,1),(1,2),(1,3)\n\n(2,1),(2,2),(2,3),(2,40)\n";
        let words = parse_ray_file(&spec, text).unwrap();
        assert_eq!(words.len(), 2);
        let ball = CayleyBall::new(&spec, 6).unwrap();
        let rays = rays_in_ball(&ball, &words);
        assert_eq!(rays[1].len(), 3);
        check_rays(ball.graph(), &rays).unwrap();

        let b = build_minor_from_rays(&spec, 2, 6, &RaySource::Words(words)).unwrap();
        assert!(b.log.verdict.pass);

        let broken = parse_ray_file(&spec, "(1,1),(1,3)").unwrap();
        assert!(matches!(
            build_minor_from_rays(&spec, 1, 6, &RaySource::Words(broken)),
            Err(RaysError::BadRay(_))
        ));
    }
}
