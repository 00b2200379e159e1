//! Bounds for groups containing a free subgroup `F_n` of finite index.
//!
//! Every `g` factors as `g = g_i f` with `g_i` a fixed left-coset
//! representative and `f ∈ F_n`. The factorization is found by dictionary
//! lookup: reduced words in the chosen basis are evaluated in `G` up to a
//! growing radius, and `g_i^{-1} g` is looked up for every `i`. Collisions
//! between distinct reduced words (the basis is not free) and ambiguous
//! coset membership are reported as errors.

use std::collections::HashMap;

use serde::Serialize;

use super::{CayleyBall, Element, GroupError, GroupSpec};
use crate::graph::{Graph, VertexSet};

/// Reduced word in the free basis, letters `±1..=n`, leftmost first.
pub type FreeWord = Vec<i32>;

/// Dictionary entries allowed before factorization gives up.
const DICTIONARY_CAP: usize = 1_000_000;

/// Extra free radius searched past a hit before it is declared unique.
const UNIQUENESS_SLACK: usize = 3;

fn reduce_concat(a: &[i32], b: &[i32]) -> FreeWord {
    let mut out = a.to_vec();
    for &l in b {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn is_reduced(w: &[i32], rank: usize) -> bool {
    w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= rank) && w.windows(2).all(|p| p[0] != -p[1])
}

/// All reduced words of length at most `radius` over `rank` letters.
fn reduced_words(rank: usize, radius: usize) -> Vec<FreeWord> {
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|i| [i, -i]).collect();
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &level {
            for &l in &letters {
                if w.first() != Some(&-l) {
                    let mut v = Vec::with_capacity(w.len() + 1);
                    v.push(l);
                    v.extend_from_slice(w);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// A group `G`, a free basis `x_1..x_n` of a finite-index subgroup, and
/// left-coset representatives `g_1 = 1, ..., g_k`.
#[derive(Clone, Debug)]
pub struct VirtuallyFree {
    spec: GroupSpec,
    basis: Vec<Element>,
    reps: Vec<Element>,
    reps_inv: Vec<Element>,
    dict: HashMap<Element, FreeWord>,
    frontier: Vec<(FreeWord, Element)>,
    dict_radius: usize,
}

impl VirtuallyFree {
    pub fn new(spec: &GroupSpec, basis: Vec<Element>, reps: Vec<Element>) -> Result<Self, GroupError> {
        let kind = spec.kind();
        if basis.is_empty() {
            return Err(GroupError::Factorization("empty free basis".into()));
        }
        for e in basis.iter().chain(&reps) {
            kind.validate(e)?;
        }
        match reps.first() {
            Some(g1) if kind.is_identity(g1) => {}
            _ => {
                return Err(GroupError::Factorization(
                    "the first coset representative must be the identity".into(),
                ))
            }
        }
        let reps_inv = reps.iter().map(|g| kind.inv(g)).collect();
        let id = kind.identity();
        Ok(VirtuallyFree {
            spec: spec.clone(),
            basis,
            reps,
            reps_inv,
            dict: HashMap::from([(id.clone(), Vec::new())]),
            frontier: vec![(Vec::new(), id)],
            dict_radius: 0,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn num_cosets(&self) -> usize {
        self.reps.len()
    }

    /// Evaluates a free word in `G`.
    pub fn evaluate(&self, w: &[i32]) -> Element {
        let kind = self.spec.kind();
        w.iter().fold(kind.identity(), |acc, &l| {
            let x = &self.basis[l.unsigned_abs() as usize - 1];
            let x = if l < 0 { kind.inv(x) } else { x.clone() };
            kind.mul(&acc, &x)
        })
    }

    fn grow(&mut self) -> Result<bool, GroupError> {
        if self.dict.len() >= DICTIONARY_CAP {
            return Ok(false);
        }
        let kind = self.spec.kind().clone();
        let rank = self.rank() as i32;
        let mut next = Vec::new();
        for (w, e) in &self.frontier {
            for l in (1..=rank).flat_map(|i| [i, -i]) {
                if w.last() == Some(&-l) {
                    continue;
                }
                let x = &self.basis[l.unsigned_abs() as usize - 1];
                let x = if l < 0 { kind.inv(x) } else { x.clone() };
                let v = kind.mul(e, &x);
                let mut wl = w.clone();
                wl.push(l);
                if let Some(prev) = self.dict.get(&v) {
                    return Err(GroupError::Factorization(format!(
                        "basis is not free: words {prev:?} and {wl:?} both equal {}",
                        kind.format(&v)
                    )));
                }
                self.dict.insert(v.clone(), wl.clone());
                next.push((wl, v));
            }
        }
        self.frontier = next;
        self.dict_radius += 1;
        Ok(true)
    }

    /// `g = g_i f`: returns `(i, f)` with `i` zero-based.
    pub fn factorize(&mut self, g: &Element) -> Result<(usize, FreeWord), GroupError> {
        let kind = self.spec.kind().clone();
        kind.validate(g)?;
        let probes: Vec<Element> = self.reps_inv.iter().map(|r| kind.mul(r, g)).collect();
        loop {
            let hits: Vec<(usize, &FreeWord)> = probes
                .iter()
                .enumerate()
                .filter_map(|(i, h)| self.dict.get(h).map(|w| (i, w)))
                .collect();
            match hits.as_slice() {
                // a lone hit is accepted once the dictionary is deep enough
                // that a second coset would likely have shown up as well
                [(i, w)] if self.dict_radius >= w.len() + UNIQUENESS_SLACK => return Ok((*i, (*w).clone())),
                [(i, w)] if self.dict.len() >= DICTIONARY_CAP => return Ok((*i, (*w).clone())),
                [_] | [] => {}
                many => {
                    return Err(GroupError::Factorization(format!(
                        "{} lies in the cosets of representatives {:?}",
                        kind.format(g),
                        many.iter().map(|(i, _)| i + 1).collect::<Vec<_>>()
                    )))
                }
            }
            if !self.grow()? {
                return Err(GroupError::Factorization(format!(
                    "{} is not g_i f for any representative within free radius {}",
                    kind.format(g),
                    self.dict_radius
                )));
            }
        }
    }

    /// `s g_i = g_j f(i,s)` for every representative `i` and generator `s`:
    /// entry `[i][s] = (j, f(i,s))`.
    pub fn transition_table(&mut self) -> Result<Vec<Vec<(usize, FreeWord)>>, GroupError> {
        let kind = self.spec.kind().clone();
        let gens = self.spec.gens().to_vec();
        let reps = self.reps.clone();
        reps.iter()
            .map(|g| gens.iter().map(|s| self.factorize(&kind.mul(s, g))).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VirtuallyFreeBound {
    /// `max_{s,i} d(f(i,s), 1)`.
    pub m_bound: usize,
    /// Largest number of Cayley-graph edges crossing a probed tree edge.
    pub d_emp: usize,
    /// `max(6 n D_emp, 3 k) + 1`.
    pub m_threshold: usize,
    pub rank: usize,
    pub cosets: usize,
    pub probed_tree_edges: usize,
    /// Ball vertices whose factorization was checked.
    pub factorized: usize,
}

/// An edge of the tree `Cay(F_n, O)`: `child = o·parent` with `child`
/// reduced and one letter longer than `parent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeEdge {
    child: FreeWord,
}

impl TreeEdge {
    pub fn new(child: FreeWord, rank: usize) -> Result<Self, GroupError> {
        if child.is_empty() || !is_reduced(&child, rank) {
            return Err(GroupError::NotTreeEdge(format!("{child:?}")));
        }
        Ok(TreeEdge { child })
    }

    pub fn child(&self) -> &[i32] {
        &self.child
    }

    pub fn parent(&self) -> &[i32] {
        &self.child[1..]
    }

    /// Whether `f` lies in the component `B(e)` containing the child, i.e.
    /// has the child as a suffix.
    pub fn on_child_side(&self, f: &[i32]) -> bool {
        f.ends_with(&self.child)
    }
}

/// Computes the exact `M`, the empirical crossing bound `D_emp` over all
/// tree edges whose child has length `<= probe_radius`, and the clique
/// order threshold. Unique factorization is checked on the Cayley ball of
/// radius `probe_radius`.
pub fn virtually_free_bound(vf: &mut VirtuallyFree, probe_radius: usize) -> Result<VirtuallyFreeBound, GroupError> {
    let ball = CayleyBall::new(vf.spec(), probe_radius)?;
    for e in ball.elements() {
        vf.factorize(e)?;
    }
    let table = vf.transition_table()?;
    let m_bound = table
        .iter()
        .flat_map(|row| row.iter().map(|(_, f)| f.len()))
        .max()
        .unwrap_or(0);

    let rank = vf.rank();
    let near = reduced_words(rank, m_bound);
    let mut d_emp = 0;
    let mut probed = 0;
    for child in reduced_words(rank, probe_radius).into_iter().filter(|w| !w.is_empty()) {
        let edge = TreeEdge { child };
        probed += 1;
        let mut crossing = 0;
        let mut seen = std::collections::HashSet::new();
        for w in &near {
            let f1 = reduce_concat(w, edge.parent());
            if edge.on_child_side(&f1) || !seen.insert(f1.clone()) {
                continue;
            }
            for row in &table {
                for (_, f) in row {
                    let f2 = reduce_concat(f, &f1);
                    if edge.on_child_side(&f2) {
                        crossing += 1;
                    }
                }
            }
        }
        d_emp = d_emp.max(crossing);
    }
    let n = rank;
    let k = vf.num_cosets();
    Ok(VirtuallyFreeBound {
        m_bound,
        d_emp,
        m_threshold: (6 * n * d_emp).max(3 * k) + 1,
        rank,
        cosets: k,
        probed_tree_edges: probed,
        factorized: ball.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingAudit {
    /// Branch sets meeting both sides.
    pub r_e: usize,
    pub k_a: usize,
    pub k_b: usize,
    /// Ball edges joining the two sides.
    pub crossing_edges: usize,
    /// Pattern edges between a set wholly on one side and a set wholly on
    /// the other (`k_a * k_b` for a complete pattern).
    pub required_cross_pairs: usize,
    /// `crossing_edges >= r_e + required_cross_pairs`.
    pub consistent: bool,
}

/// Splits the ball's vertices by the side of `edge` their free part lies on
/// and counts branch sets and edges across the split.
pub fn crossing_audit(
    ball: &CayleyBall,
    vf: &mut VirtuallyFree,
    edge: &TreeEdge,
    pattern: &Graph,
    sets: &[VertexSet],
) -> Result<CrossingAudit, GroupError> {
    if !is_reduced(edge.child(), vf.rank()) {
        return Err(GroupError::NotTreeEdge(format!("{:?}", edge.child())));
    }
    let mut child_side = Vec::with_capacity(ball.len());
    for e in ball.elements() {
        let (_, f) = vf.factorize(e)?;
        child_side.push(edge.on_child_side(&f));
    }
    let crossing_edges = ball
        .graph()
        .edges()
        .iter()
        .filter(|&&(u, v)| child_side[u] != child_side[v])
        .count();
    #[derive(PartialEq)]
    enum Where {
        A,
        B,
        Both,
    }
    let place: Vec<Where> = sets
        .iter()
        .map(|s| {
            let b = s.iter().filter(|&v| child_side[v]).count();
            if b == 0 {
                Where::A
            } else if b == s.len() {
                Where::B
            } else {
                Where::Both
            }
        })
        .collect();
    let r_e = place.iter().filter(|p| **p == Where::Both).count();
    let k_a = place.iter().filter(|p| **p == Where::A).count();
    let k_b = place.iter().filter(|p| **p == Where::B).count();
    let required_cross_pairs = pattern
        .edges()
        .iter()
        .filter(|&&(i, j)| {
            (place[i] == Where::A && place[j] == Where::B) || (place[i] == Where::B && place[j] == Where::A)
        })
        .count();
    Ok(CrossingAudit {
        r_e,
        k_a,
        k_b,
        crossing_edges,
        required_cross_pairs,
        consistent: crossing_edges >= r_e + required_cross_pairs,
    })
}

/// All tree edges with child length in `1..=radius`.
pub(crate) fn tree_edges(rank: usize, radius: usize) -> Vec<TreeEdge> {
    reduced_words(rank, radius)
        .into_iter()
        .filter(|w| !w.is_empty())
        .map(|child| TreeEdge { child })
        .collect()
}

impl VirtuallyFree {
    pub fn tree_edges(&self, radius: usize) -> Vec<TreeEdge> {
        tree_edges(self.rank(), radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupKind;

    fn d_inf() -> (GroupSpec, Element, Element, Element) {
        let spec = GroupSpec::standard("C2 * C2".parse::<GroupKind>().unwrap());
        let k = spec.kind().clone();
        let a = k.parse("g[(1)]").unwrap();
        let b = k.parse("h[(1)]").unwrap();
        let ab = k.mul(&a, &b);
        (spec, a, b, ab)
    }

    #[test]
    fn integers_have_m_one() {
        let z = GroupSpec::standard(GroupKind::Free(1));
        let mut vf = VirtuallyFree::new(&z, vec![Element::Word(vec![1])], vec![Element::Word(vec![])]).unwrap();
        let b = virtually_free_bound(&mut vf, 4).unwrap();
        assert_eq!(b.m_bound, 1);
        assert_eq!(b.d_emp, 1);
        assert_eq!(b.m_threshold, 7);
    }

    #[test]
    fn free_group_tree_cuts_have_one_edge() {
        let f2 = GroupSpec::standard(GroupKind::Free(2));
        let basis = vec![Element::Word(vec![1]), Element::Word(vec![2])];
        let mut vf = VirtuallyFree::new(&f2, basis, vec![Element::Word(vec![])]).unwrap();
        let b = virtually_free_bound(&mut vf, 3).unwrap();
        assert_eq!((b.m_bound, b.d_emp), (1, 1));
        assert_eq!(b.probed_tree_edges, 4 + 12 + 36);
    }

    #[test]
    fn infinite_dihedral_transitions() {
        let (spec, a, b, ab) = d_inf();
        let k = spec.kind().clone();
        let mut vf = VirtuallyFree::new(&spec, vec![ab.clone()], vec![k.identity(), a.clone()]).unwrap();
        assert_eq!(vf.factorize(&b).unwrap(), (1, vec![1]));
        assert_eq!(vf.factorize(&k.mul(&b, &a)).unwrap(), (0, vec![-1]));
        let table = vf.transition_table().unwrap();
        // gens order: a, b
        assert_eq!(table[0][0], (1, vec![]));
        assert_eq!(table[0][1], (1, vec![1]));
        assert_eq!(table[1][0], (0, vec![]));
        assert_eq!(table[1][1], (0, vec![-1]));
        let bound = virtually_free_bound(&mut vf, 6).unwrap();
        assert_eq!(bound.m_bound, 1);
    }

    #[test]
    fn bad_inputs() {
        let (spec, a, _, ab) = d_inf();
        let k = spec.kind().clone();
        assert!(VirtuallyFree::new(&spec, vec![ab.clone()], vec![a.clone()]).is_err());
        // a and a·ab = b... both a and 1 are fine, but 1 and ab are the same coset
        let mut vf = VirtuallyFree::new(&spec, vec![ab.clone()], vec![k.identity(), ab.clone()]).unwrap();
        assert!(matches!(vf.factorize(&k.identity()), Err(GroupError::Factorization(_))));
        // (ab)^2 together with ab is not a free basis
        let abab = k.mul(&ab, &ab);
        let mut vf = VirtuallyFree::new(&spec, vec![ab.clone(), abab], vec![k.identity(), a]).unwrap();
        assert!(vf.factorize(&k.mul(&ab, &ab)).is_err() || vf.factorize(&k.pow(&ab, 5)).is_err());
        assert!(TreeEdge::new(vec![], 1).is_err());
        assert!(TreeEdge::new(vec![1, -1], 1).is_err());
    }
}
