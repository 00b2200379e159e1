use std::collections::HashMap;

use super::{Element, GroupError, GroupSpec};
use crate::graph::{Graph, VertexId};

/// Default ceiling on the number of ball vertices.
pub const DEFAULT_BALL_CAP: usize = 5_000_000;

/// Finite ball of a right-invariant Cayley graph: `u ~ v` iff `u = s v` for a
/// generator `s`, both endpoints inside the ball. The identity is vertex 0
/// and ids follow BFS order (generators tried in list order).
#[derive(Clone, Debug)]
pub struct CayleyBall {
    spec: GroupSpec,
    edge_gens: Vec<Element>,
    radius: usize,
    graph: Graph,
    elements: Vec<Element>,
    lengths: Vec<usize>,
    index: HashMap<Element, VertexId>,
}

impl CayleyBall {
    pub fn new(spec: &GroupSpec, radius: usize) -> Result<Self, GroupError> {
        Self::with_cap(spec, radius, DEFAULT_BALL_CAP)
    }

    pub fn with_cap(spec: &GroupSpec, radius: usize, cap: usize) -> Result<Self, GroupError> {
        Self::build(spec, radius, spec.gens().to_vec(), cap)
    }

    /// Ball of radius `radius` in the word metric of `spec`, with edges
    /// given by `edge_gens` instead. With `edge_gens` a superset of the
    /// generators this is an induced subgraph of the Cayley graph for
    /// `edge_gens`.
    pub fn with_edge_gens(
        spec: &GroupSpec,
        radius: usize,
        edge_gens: &[Element],
        cap: usize,
    ) -> Result<Self, GroupError> {
        for s in edge_gens {
            spec.kind().validate(s)?;
        }
        Self::build(spec, radius, edge_gens.to_vec(), cap)
    }

    fn build(spec: &GroupSpec, radius: usize, edge_gens: Vec<Element>, cap: usize) -> Result<Self, GroupError> {
        let kind = spec.kind();
        let id = kind.identity();
        let mut elements = vec![id.clone()];
        let mut lengths = vec![0];
        let mut index = HashMap::from([(id, 0)]);
        let mut head = 0;
        while head < elements.len() {
            if lengths[head] >= radius {
                head += 1;
                continue;
            }
            let next_len = lengths[head] + 1;
            for s in spec.gens() {
                let u = kind.mul(s, &elements[head]);
                if !index.contains_key(&u) {
                    if elements.len() >= cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    index.insert(u.clone(), elements.len());
                    elements.push(u);
                    lengths.push(next_len);
                }
            }
            head += 1;
        }

        let mut edges = Vec::new();
        for (v, e) in elements.iter().enumerate() {
            for s in &edge_gens {
                if let Some(&u) = index.get(&kind.mul(s, e)) {
                    if u != v {
                        edges.push((u, v));
                    }
                }
            }
        }
        let labels = elements.iter().map(|e| Some(kind.format(e))).collect();
        let graph = Graph::from_parts(labels, edges).expect("Cayley ball edges are valid");
        Ok(CayleyBall {
            spec: spec.clone(),
            edge_gens,
            radius,
            graph,
            elements,
            lengths,
            index,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn edge_gens(&self) -> &[Element] {
        &self.edge_gens
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, v: VertexId) -> &Element {
        &self.elements[v]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Word length of vertex `v` (distance from the identity).
    pub fn length(&self, v: VertexId) -> usize {
        self.lengths[v]
    }

    pub fn vertex_of(&self, e: &Element) -> Option<VertexId> {
        self.index.get(e).copied()
    }

    /// Looks up a parsed element, e.g. `"(2,1)"`.
    pub fn vertex_of_text(&self, s: &str) -> Result<Option<VertexId>, GroupError> {
        Ok(self.vertex_of(&self.spec.parse_element(s)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{connected_components, set_diameter};
    use crate::groups::GroupKind;

    fn z2_s1() -> GroupSpec {
        GroupSpec::standard(GroupKind::FreeAbelian(2))
    }

    #[test]
    fn z2_star_and_growth() {
        let b = CayleyBall::new(&z2_s1(), 1).unwrap();
        assert_eq!((b.len(), b.graph().num_edges()), (5, 4));
        assert!(b.graph().neighbors(0).eq(1..5));
        for r in 0..8 {
            let b = CayleyBall::new(&z2_s1(), r).unwrap();
            assert_eq!(b.len(), 2 * r * r + 2 * r + 1);
        }
    }

    #[test]
    fn free_ball_is_a_tree() {
        let f2 = GroupSpec::standard(GroupKind::Free(2));
        let b = CayleyBall::new(&f2, 2).unwrap();
        assert_eq!((b.len(), b.graph().num_edges()), (17, 16));
        assert_eq!(connected_components(b.graph()).len(), 1);
        for (n, r) in [(3usize, 3usize), (2, 5)] {
            let b = CayleyBall::new(&GroupSpec::standard(GroupKind::Free(n)), r).unwrap();
            let expect = 1 + 2 * n * ((2 * n - 1).pow(r as u32) - 1) / (2 * n - 2);
            assert_eq!(b.len(), expect);
        }
    }

    #[test]
    fn s2_ball_of_radius_one() {
        let s2: GroupSpec = "Z^2 | gens=(1,0),(2,0),(0,1),sym".parse().unwrap();
        let b = CayleyBall::new(&s2, 1).unwrap();
        assert_eq!(b.len(), 7);
        let p10 = b.vertex_of_text("(1,0)").unwrap().unwrap();
        let p20 = b.vertex_of_text("(2,0)").unwrap().unwrap();
        assert!(b.graph().has_edge(p10, p20));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            CayleyBall::with_cap(&z2_s1(), 10, 100).unwrap_err(),
            GroupError::CapExceeded { cap: 100 }
        );
    }

    #[test]
    fn lengths_are_graph_distances() {
        let k: GroupKind = "C2 * C3".parse().unwrap();
        let b = CayleyBall::new(&GroupSpec::standard(k), 6).unwrap();
        let d = crate::graph::bfs_distances(b.graph(), 0).unwrap();
        for v in b.graph().vertices() {
            assert_eq!(d.get(v), Some(b.length(v)));
        }
        let all = b.graph().vertices().collect();
        assert!(set_diameter(b.graph(), &all).unwrap() <= 12);
    }
}
