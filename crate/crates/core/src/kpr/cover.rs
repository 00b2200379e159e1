//! The eroded cover `{U_T}` and its measurements.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{map_indices, CutSequence, Partition, Residual};
use crate::graph::{ball, bfs_restricted, Graph, VertexId, VertexSet, UNREACHED};

/// Per-partition view of the cover: which cluster each vertex is in and
/// whether it survived the erosion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverPart {
    pub delta: Vec<usize>,
    pub cluster_of: Vec<usize>,
    pub in_u: Vec<bool>,
    /// Distinct-set id of each cluster's `U_T`.
    pub set_of_cluster: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverElement {
    pub partition: usize,
    pub cluster: usize,
    pub cluster_size: usize,
    /// `U_T`; empty elements are kept.
    pub members: VertexSet,
    /// Equal member sets from different partitions share this id.
    pub set_id: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub s: usize,
    pub parts: Vec<CoverPart>,
    pub elements: Vec<CoverElement>,
}

impl Cover {
    fn from_parts(s: usize, parts: Vec<CoverPart>, partitions: &[&Partition]) -> Cover {
        let mut elements = Vec::new();
        let mut ids: HashMap<VertexSet, usize> = HashMap::new();
        for (p, (part, partition)) in parts.iter().zip(partitions).enumerate() {
            for (c, cluster) in partition.clusters.iter().enumerate() {
                let members: VertexSet = cluster.iter().filter(|&v| part.in_u[v]).collect();
                let next = ids.len();
                let set_id = *ids.entry(members.clone()).or_insert(next);
                elements.push(CoverElement {
                    partition: p,
                    cluster: c,
                    cluster_size: cluster.len(),
                    members,
                    set_id,
                });
            }
        }
        let mut offset = 0;
        let mut parts = parts;
        for (part, partition) in parts.iter_mut().zip(partitions) {
            part.set_of_cluster = (0..partition.clusters.len())
                .map(|c| elements[offset + c].set_id)
                .collect();
            offset += partition.clusters.len();
        }
        Cover { s, parts, elements }
    }

    /// The cover whose elements are the clusters themselves (`U_T = T`).
    /// Useful as a control: it generally fails the separation check.
    pub fn uneroded(partitions: &[(CutSequence, Partition)], s: usize) -> Cover {
        let parts = partitions
            .iter()
            .map(|(_, p)| CoverPart {
                delta: p.delta.clone(),
                cluster_of: p.cluster_of.clone(),
                in_u: vec![true; p.cluster_of.len()],
                set_of_cluster: Vec::new(),
            })
            .collect();
        let refs: Vec<&Partition> = partitions.iter().map(|(_, p)| p).collect();
        Cover::from_parts(s, parts, &refs)
    }

    /// The one-element cover `{V}`.
    pub fn whole(n: usize, s: usize) -> Cover {
        let part = Partition {
            delta: Vec::new(),
            clusters: vec![(0..n).collect()],
            cluster_of: vec![0; n],
        };
        let parts = vec![CoverPart {
            delta: Vec::new(),
            cluster_of: vec![0; n],
            in_u: vec![true; n],
            set_of_cluster: Vec::new(),
        }];
        Cover::from_parts(s, parts, &[&part])
    }

    pub fn num_nonempty(&self) -> usize {
        self.elements.iter().filter(|e| !e.members.is_empty()).count()
    }
}

/// `U_T`: members of `T` at distance `>= s+1` from the endpoints of `F_1` in
/// the host and from the endpoints of `F_k` in `G_{k-1}` for `k >= 2`.
pub fn build_cover(host: &Graph, partitions: &[(CutSequence, Partition)], s: usize) -> Cover {
    let parts = map_indices(partitions.len(), |p| {
        let (cuts, partition) = &partitions[p];
        let mut keep = vec![true; host.num_vertices()];
        let mut res = Residual::new(host);
        for level in &cuts.levels {
            let near = bfs_restricted(
                host,
                level.edges.endpoints().iter(),
                |e| !res.removed[e],
                |_| true,
                Some(s as u32),
            );
            for (v, &d) in near.iter().enumerate() {
                if d != UNREACHED {
                    keep[v] = false;
                }
            }
            for e in level.edges.ids_in(host) {
                res.removed[e] = true;
            }
        }
        CoverPart {
            delta: partition.delta.clone(),
            cluster_of: partition.cluster_of.clone(),
            in_u: keep,
            set_of_cluster: Vec::new(),
        }
    });
    let refs: Vec<&Partition> = partitions.iter().map(|(_, p)| p).collect();
    Cover::from_parts(s, parts, &refs)
}

/// Vertices whose radius-`s` ball avoids the boundary sphere of the host
/// viewed as a ball around vertex 0.
pub fn interior_mask(host: &Graph, s: usize) -> Vec<bool> {
    let d = bfs_restricted(host, [0], |_| true, |_| true, None);
    let radius = d.iter().filter(|&&x| x != UNREACHED).max().copied().unwrap_or(0) as usize;
    d.iter().map(|&x| x != UNREACHED && x as usize + s <= radius).collect()
}

fn balls(host: &Graph, s: usize) -> Vec<Vec<VertexId>> {
    map_indices(host.num_vertices(), |x| ball(host, x, s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplicity {
    /// Largest number of distinct cover sets meeting one closed `s`-ball.
    pub value: usize,
    pub witness: Option<VertexId>,
    /// Same, over centers whose ball stays inside the host ball.
    pub interior_value: usize,
    pub interior_witness: Option<VertexId>,
    /// Largest count with one entry per partition and cluster, so equal
    /// sets from different partitions count repeatedly.
    pub counted_value: usize,
}

pub fn s_multiplicity(host: &Graph, cover: &Cover) -> Multiplicity {
    let n = host.num_vertices();
    let b = balls(host, cover.s);
    let per_x: Vec<(u32, u32)> = map_indices(n, |x| {
        let mut ids: Vec<usize> = Vec::new();
        let mut counted = 0;
        for part in &cover.parts {
            let start = ids.len();
            for &y in &b[x] {
                if part.in_u[y] {
                    let id = part.set_of_cluster[part.cluster_of[y]];
                    if !ids[start..].contains(&id) {
                        ids.push(id);
                    }
                }
            }
            counted += ids.len() - start;
        }
        ids.sort_unstable();
        ids.dedup();
        (ids.len() as u32, counted as u32)
    });
    let interior = interior_mask(host, cover.s);
    let best = |only_interior: bool| {
        let mut value = 0;
        let mut witness = None;
        for x in 0..n {
            let t = per_x[x].0 as usize;
            if (!only_interior || interior[x]) && (witness.is_none() || t > value) {
                value = t;
                witness = Some(x);
            }
        }
        (value, witness)
    };
    let (value, witness) = best(false);
    let (interior_value, interior_witness) = best(true);
    Multiplicity {
        value,
        witness,
        interior_value,
        interior_witness,
        counted_value: per_x.iter().map(|p| p.1 as usize).max().unwrap_or(0),
    }
}

/// A center `x` whose ball meets `U_T` (at `y`) although `x ∉ T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub center: VertexId,
    pub partition: usize,
    pub met: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub pass: bool,
    pub witness: Option<SeparationWitness>,
}

/// Checks that `B(x, s)` meets `U_T` only when `x ∈ T`, for every vertex
/// `x` and every cover element.
pub fn separation_check(host: &Graph, cover: &Cover) -> Separation {
    let n = host.num_vertices();
    let b = balls(host, cover.s);
    let first: Vec<Option<SeparationWitness>> = map_indices(cover.parts.len(), |p| {
        let part = &cover.parts[p];
        (0..n).find_map(|x| {
            b[x].iter()
                .find(|&&y| part.in_u[y] && part.cluster_of[y] != part.cluster_of[x])
                .map(|&y| SeparationWitness {
                    center: x,
                    partition: p,
                    met: y,
                })
        })
    });
    let witness = first.into_iter().flatten().next();
    Separation {
        pass: witness.is_none(),
        witness,
    }
}

/// Host distances, precomputed as a matrix for small hosts and by BFS on
/// demand otherwise.
pub enum AmbientMetric {
    Matrix { n: usize, d: Vec<u16> },
    OnDemand,
}

/// Largest host for which the distance matrix is stored.
const MATRIX_MAX_VERTICES: usize = 8_000;

enum Row<'a> {
    Borrowed(&'a [u16]),
    Owned(Vec<u32>),
}

impl Row<'_> {
    fn get(&self, v: VertexId) -> u32 {
        match self {
            Row::Borrowed(r) if r[v] == u16::MAX => UNREACHED,
            Row::Borrowed(r) => r[v] as u32,
            Row::Owned(r) => r[v],
        }
    }
}

impl AmbientMetric {
    pub fn new(host: &Graph) -> Self {
        let n = host.num_vertices();
        if n > MATRIX_MAX_VERTICES {
            return AmbientMetric::OnDemand;
        }
        let rows = map_indices(n, |v| {
            bfs_restricted(host, [v], |_| true, |_| true, None)
                .into_iter()
                .map(|x| {
                    if x == UNREACHED {
                        u16::MAX
                    } else {
                        x.min(u16::MAX as u32 - 1) as u16
                    }
                })
                .collect::<Vec<u16>>()
        });
        AmbientMetric::Matrix { n, d: rows.concat() }
    }

    fn row<'a>(&'a self, host: &Graph, v: VertexId) -> Row<'a> {
        match self {
            AmbientMetric::Matrix { n, d } => Row::Borrowed(&d[v * n..(v + 1) * n]),
            AmbientMetric::OnDemand => Row::Owned(bfs_restricted(host, [v], |_| true, |_| true, None)),
        }
    }

    /// Exact host-metric diameter of a nonempty set. Members are examined
    /// from the outermost layer around a central member inward, stopping
    /// once no remaining pair can beat the bound found so far.
    pub fn diameter(&self, host: &Graph, set: &VertexSet) -> usize {
        let members = set.as_slice();
        let Some(&start) = members.first() else {
            return 0;
        };
        let ecc = |row: &Row| members.iter().map(|&v| row.get(v)).max().unwrap_or(0);
        let far = |row: &Row| {
            *members
                .iter()
                .max_by_key(|&&v| (row.get(v), std::cmp::Reverse(v)))
                .unwrap()
        };
        let r0 = self.row(host, start);
        let u = far(&r0);
        let ru = self.row(host, u);
        let v = far(&ru);
        let mut lb = ru.get(v);
        if lb == UNREACHED {
            return UNREACHED as usize;
        }
        let rv = self.row(host, v);
        let center = *members.iter().min_by_key(|&&x| (ru.get(x).max(rv.get(x)), x)).unwrap();
        let rc = self.row(host, center);
        let mut layers: BTreeMap<u32, Vec<VertexId>> = BTreeMap::new();
        for &x in members {
            layers.entry(rc.get(x)).or_default().push(x);
        }
        // pairs within layers <= level are at most 2*level apart
        for (&level, xs) in layers.iter().rev() {
            if lb >= 2 * level {
                break;
            }
            for &x in xs {
                lb = lb.max(ecc(&self.row(host, x)));
            }
        }
        lb as usize
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterReport {
    pub max_diameter: usize,
    /// `max_diameter / max(s, 1)`.
    pub gamma_emp: f64,
    /// Diameter → number of nonempty cover elements.
    pub histogram: BTreeMap<usize, usize>,
    /// Per element, `None` when `U_T` is empty.
    pub diameters: Vec<Option<usize>>,
}

pub fn cover_diameter_report(host: &Graph, cover: &Cover, metric: &AmbientMetric) -> DiameterReport {
    let diameters: Vec<Option<usize>> = map_indices(cover.elements.len(), |i| {
        let m = &cover.elements[i].members;
        (!m.is_empty()).then(|| metric.diameter(host, m))
    });
    let mut histogram = BTreeMap::new();
    for d in diameters.iter().flatten() {
        *histogram.entry(*d).or_insert(0) += 1;
    }
    let max_diameter = diameters.iter().flatten().copied().max().unwrap_or(0);
    DiameterReport {
        max_diameter,
        gamma_emp: max_diameter as f64 / cover.s.max(1) as f64,
        histogram,
        diameters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::set_diameter;
    use crate::kpr::{all_partitions, build_cuts, clusters_of, CutParams, KprOptions};

    fn path_cover(s: usize) -> (Graph, Vec<(CutSequence, Partition)>, Cover) {
        let g = Graph::path(31);
        let cuts = build_cuts(&g, &CutParams::new(s, vec![0]).unwrap());
        let part = clusters_of(&g, &cuts);
        let parts = vec![(cuts, part)];
        let cover = build_cover(&g, &parts, s);
        (g, parts, cover)
    }

    #[test]
    fn path_erosion() {
        let (g, _, cover) = path_cover(0);
        assert_eq!(cover.elements[1].members, (2..=11).collect());
        assert_eq!(cover.elements[0].members, VertexSet::new());
        assert_eq!(cover.num_nonempty(), 3);
        let metric = AmbientMetric::new(&g);
        let rep = cover_diameter_report(&g, &cover, &metric);
        assert_eq!(rep.diameters[1], Some(9));
        assert_eq!(rep.diameters[0], None);
        assert!(separation_check(&g, &cover).pass);
    }

    #[test]
    fn uneroded_cover_fails_separation_at_a_cut() {
        let (g, parts, _) = path_cover(0);
        let bad = Cover::uneroded(&parts, 1);
        let sep = separation_check(&g, &bad);
        let w = sep.witness.expect("un-eroded clusters touch across cuts");
        assert_eq!((w.center, w.met), (0, 1));
    }

    #[test]
    fn whole_cover() {
        let g = Graph::grid(4, 4);
        let cover = Cover::whole(16, 2);
        assert_eq!(s_multiplicity(&g, &cover).value, 1);
        assert!(separation_check(&g, &cover).pass);
        let single = Cover::whole(1, 0);
        let g1 = Graph::from_edges(1, []).unwrap();
        assert_eq!(
            cover_diameter_report(&g1, &single, &AmbientMetric::new(&g1)).max_diameter,
            0
        );
    }

    #[test]
    fn far_apart_elements_have_multiplicity_one() {
        let g = Graph::path(10);
        let part = Partition {
            delta: vec![],
            clusters: vec![(0..5).collect(), (5..10).collect()],
            cluster_of: (0..10).map(|v| v / 5).collect(),
        };
        let in_u = (0..10).map(|v| v <= 1 || v >= 8).collect();
        let cover = Cover {
            s: 2,
            parts: vec![CoverPart {
                delta: vec![],
                cluster_of: part.cluster_of.clone(),
                in_u,
                set_of_cluster: vec![0, 1],
            }],
            elements: vec![],
        };
        assert_eq!(s_multiplicity(&g, &cover).value, 1);
    }

    #[test]
    fn fast_diameter_matches_pairwise() {
        let g = Graph::grid(9, 7);
        let parts = all_partitions(&g, 2, 0, KprOptions::default()).unwrap();
        let cover = build_cover(&g, &parts, 0);
        let metric = AmbientMetric::new(&g);
        for e in cover.elements.iter().filter(|e| !e.members.is_empty()) {
            assert_eq!(metric.diameter(&g, &e.members), set_diameter(&g, &e.members).unwrap());
            assert_eq!(
                AmbientMetric::OnDemand.diameter(&g, &e.members),
                set_diameter(&g, &e.members).unwrap()
            );
        }
        let c6 = Graph::cycle(6);
        let all: VertexSet = (0..6).collect();
        assert_eq!(AmbientMetric::new(&c6).diameter(&c6, &all), 3);
    }
}
