//! Quotient of a graph by a partition into connected classes (each class a
//! translate `T·h` of a connected transversal), and the lifting of branch
//! sets back from the quotient.

use super::GroupError;
use crate::graph::{is_connected_subset, Graph, VertexId, VertexSet};

#[derive(Clone, Debug)]
pub struct Quotient {
    pub graph: Graph,
    /// Members of each class, indexed by quotient vertex. Classes are
    /// numbered in order of their smallest member.
    pub classes: Vec<VertexSet>,
    /// Quotient vertex of each original vertex.
    pub class_of: Vec<VertexId>,
}

/// Collapses every class to a vertex; two classes are adjacent iff some
/// edge of `x` joins them. `class_of[v]` is an arbitrary class key for `v`.
pub fn babai_collapse(x: &Graph, class_of: &[usize]) -> Result<Quotient, GroupError> {
    if class_of.len() != x.num_vertices() {
        return Err(GroupError::NotPartition(format!(
            "{} class entries for {} vertices",
            class_of.len(),
            x.num_vertices()
        )));
    }
    let mut dense = std::collections::HashMap::new();
    let mut members: Vec<Vec<VertexId>> = Vec::new();
    let mut quotient_of = Vec::with_capacity(class_of.len());
    for (v, key) in class_of.iter().enumerate() {
        let next = dense.len();
        let q = *dense.entry(*key).or_insert(next);
        if q == members.len() {
            members.push(Vec::new());
        }
        members[q].push(v);
        quotient_of.push(q);
    }
    let classes: Vec<VertexSet> = members.into_iter().map(VertexSet::from).collect();
    for (q, c) in classes.iter().enumerate() {
        if !is_connected_subset(x, c).expect("members are vertices of x") {
            return Err(GroupError::DisconnectedClass(q));
        }
    }
    let labels = classes
        .iter()
        .map(|c| c.first().and_then(|v| x.label(v)).map(str::to_string))
        .collect();
    let edges = x
        .edges()
        .iter()
        .map(|&(u, v)| (quotient_of[u], quotient_of[v]))
        .filter(|(a, b)| a != b);
    let graph = Graph::from_parts(labels, edges).expect("quotient edges are valid");
    Ok(Quotient {
        graph,
        classes,
        class_of: quotient_of,
    })
}

/// Branch sets of a minor of the quotient lifted to `x`: each quotient
/// branch set becomes the union of its classes. Classes are connected and
/// adjacent classes are joined by an edge of `x`, so lifted sets stay
/// connected, disjoint and pairwise adjacent wherever the originals were.
pub fn lift_branch_sets(q: &Quotient, sets: &[VertexSet]) -> Vec<VertexSet> {
    sets.iter()
        .map(|s| s.iter().flat_map(|c| q.classes[c].iter()).collect())
        .collect()
}
