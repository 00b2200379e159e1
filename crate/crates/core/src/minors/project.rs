//! Moving a minor of a free product `G * H` into one factor.
//!
//! With generators taken from the factors, the Cayley graph of `G * H` is a
//! tree of copies `X·w` of the factor graphs (`X ∈ {G, H}`, `w` a normal
//! form not starting with a letter of `X`), glued at single vertices. A
//! minor whose pattern has no cut-vertex cannot use that gluing, so every
//! branch set meets one common copy and the intersections form a minor of
//! the copy. Right multiplication by `w⁻¹` carries the copy onto the
//! factor's own Cayley graph.

use std::collections::HashMap;

use super::{has_cut_vertex, verify_minor, BranchDecomposition, MinorError};
use crate::graph::VertexSet;
use crate::groups::{CayleyBall, Element, GroupSpec, Side};

/// A decomposition carried into a factor's Cayley ball.
#[derive(Clone, Debug)]
pub struct Projection {
    pub side: Side,
    /// `w` with the chosen copy equal to `X·w`.
    pub coset: Element,
    pub factor_ball: CayleyBall,
    pub bd: BranchDecomposition,
    /// Copies tried before one produced a verified minor.
    pub candidates_tried: usize,
}

/// The copy of factor `side` through `v`: strip a leading `side` letter.
fn copy_through(side: Side, v: &Element) -> Element {
    match v {
        Element::Alt(letters) if letters.first().is_some_and(|l| l.side == side) => Element::Alt(letters[1..].to_vec()),
        _ => v.clone(),
    }
}

/// The single letter of `e`, if it is one.
fn single_letter(e: &Element) -> Option<(Side, &Element)> {
    match e {
        Element::Alt(letters) if letters.len() == 1 => Some((letters[0].side, &letters[0].elem)),
        _ => None,
    }
}

fn factor_spec(spec: &GroupSpec, side: Side) -> Result<GroupSpec, MinorError> {
    let kind = spec.kind();
    let fk = kind
        .factor(side)
        .ok_or_else(|| MinorError::Precondition(format!("{kind} is not a free product")))?;
    let mut gens = Vec::new();
    for s in spec.gens() {
        match single_letter(s) {
            Some((sd, e)) if sd == side => gens.push(e.clone()),
            Some(_) => {}
            None => {
                return Err(MinorError::Precondition(format!(
                    "generator {} is not a letter of one factor",
                    spec.format(s)
                )))
            }
        }
    }
    Ok(GroupSpec::new(fk.clone(), gens, false)?)
}

/// Finds the factor copy carrying the minor, translates it to the factor
/// at the identity and returns the intersected branch sets there.
pub fn project_free_product_minor(host: &CayleyBall, bd: &BranchDecomposition) -> Result<Projection, MinorError> {
    let spec = host.spec();
    let kind = spec.kind();
    if kind.factor(Side::Left).is_none() {
        return Err(MinorError::Precondition(format!("{kind} is not a free product")));
    }
    if has_cut_vertex(&bd.pattern)? {
        return Err(MinorError::PatternHasCutVertex);
    }
    let verdict = verify_minor(host.graph(), bd);
    if !verdict.pass {
        return Err(MinorError::Invalid(verdict.failure().unwrap_or_default()));
    }
    let g = host.graph();
    let mut owner = vec![usize::MAX; g.num_vertices()];
    for (i, s) in bd.sets.iter().enumerate() {
        for v in s.iter() {
            owner[v] = i;
        }
    }

    // Copies are ranked by how many branch-set edges they carry, edges
    // realizing pattern edges counting most.
    let mut score: HashMap<(Side, Element), (usize, usize)> = HashMap::new();
    for &(u, v) in g.edges() {
        let (a, b) = (owner[u], owner[v]);
        if a == usize::MAX || b == usize::MAX {
            continue;
        }
        let s = kind.mul(host.element(u), &kind.inv(host.element(v)));
        let Some((side, _)) = single_letter(&s) else {
            continue;
        };
        let entry = score.entry((side, copy_through(side, host.element(v)))).or_default();
        if a != b {
            entry.0 += 1;
        } else {
            entry.1 += 1;
        }
    }
    for s in &bd.sets {
        for v in s.iter() {
            for side in [Side::Left, Side::Right] {
                score.entry((side, copy_through(side, host.element(v)))).or_default();
            }
        }
    }
    let mut ranked: Vec<((Side, Element), (usize, usize))> = score.into_iter().collect();
    ranked.sort_by(|(ka, sa), (kb, sb)| sb.cmp(sa).then_with(|| ka.cmp(kb)));

    let mut balls: HashMap<Side, CayleyBall> = HashMap::new();
    let mut first_empty = None;
    for (tried, ((side, w), _)) in ranked.into_iter().enumerate() {
        let w_inv = kind.inv(&w);
        let mut sets = Vec::with_capacity(bd.sets.len());
        let mut factor_elems: Vec<Vec<Element>> = Vec::with_capacity(bd.sets.len());
        for s in &bd.sets {
            let mut here = Vec::new();
            for v in s.iter() {
                let y = kind.mul(host.element(v), &w_inv);
                let fk = kind.factor(side).unwrap();
                let g_elem = match single_letter(&y) {
                    Some((sd, e)) if sd == side => Some(e.clone()),
                    None if kind.is_identity(&y) => Some(fk.identity()),
                    _ => None,
                };
                if let Some(e) = g_elem {
                    here.push(e);
                }
            }
            factor_elems.push(here);
        }
        if let Some(i) = factor_elems.iter().position(|s| s.is_empty()) {
            first_empty.get_or_insert(i);
            continue;
        }
        if let std::collections::hash_map::Entry::Vacant(slot) = balls.entry(side) {
            slot.insert(CayleyBall::new(&factor_spec(spec, side)?, host.radius())?);
        }
        let ball = &balls[&side];
        let mut ok = true;
        for elems in &factor_elems {
            let ids: Option<Vec<usize>> = elems.iter().map(|e| ball.vertex_of(e)).collect();
            match ids {
                Some(ids) => sets.push(VertexSet::from(ids)),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let projected = BranchDecomposition::new(bd.pattern.clone(), sets);
        if verify_minor(ball.graph(), &projected).pass {
            #[cfg(debug_assertions)]
            cut_vertex_cross_check(host, bd, side, &w);
            return Ok(Projection {
                side,
                coset: w,
                factor_ball: balls.remove(&side).unwrap(),
                bd: projected,
                candidates_tried: tried + 1,
            });
        }
    }
    Err(MinorError::EmptyIntersection(first_empty.unwrap_or(0)))
}

/// Every branch-set vertex outside the chosen copy reaches the copy's part
/// of the minor through a single vertex, so at most one internally
/// disjoint path joins them.
#[cfg(debug_assertions)]
fn cut_vertex_cross_check(host: &CayleyBall, bd: &BranchDecomposition, side: Side, w: &Element) {
    use crate::graph::vertex_disjoint_paths;
    let kind = host.spec().kind();
    let w_inv = kind.inv(w);
    let inside = |v: usize| {
        let y = kind.mul(host.element(v), &w_inv);
        kind.is_identity(&y) || single_letter(&y).is_some_and(|(sd, _)| sd == side)
    };
    let all: Vec<usize> = bd.sets.iter().flat_map(|s| s.iter()).collect();
    let core: VertexSet = all.iter().copied().filter(|&v| inside(v)).collect();
    for &x in all.iter().filter(|&&v| !inside(v)).take(8) {
        let found =
            vertex_disjoint_paths(host.graph(), &VertexSet::singleton(x), &core, 2).expect("vertices of the host");
        debug_assert!(
            found.paths.len() <= 1,
            "vertex {x} reaches the copy along two disjoint paths"
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::{construct_z2_s2_minor, PatternGraph};

    fn host(radius: usize) -> CayleyBall {
        let spec: GroupSpec = "(Z^2) * C2 | gens=g[(1,0)],g[(2,0)],g[(0,1)],h[(1)],sym"
            .parse()
            .unwrap();
        CayleyBall::new(&spec, radius).unwrap()
    }

    /// Copies a decomposition of the S2 ball into the host, right-translated by `t`.
    fn plant(h: &CayleyBall, src: &CayleyBall, bd: &BranchDecomposition, t: &Element) -> BranchDecomposition {
        let kind = h.spec().kind();
        let sets = bd
            .sets
            .iter()
            .map(|s| {
                s.iter()
                    .map(|v| {
                        let e = kind.mul(&kind.embed(Side::Left, src.element(v).clone()), t);
                        h.vertex_of(&e).expect("planted vertex inside the host ball")
                    })
                    .collect()
            })
            .collect();
        BranchDecomposition::new(bd.pattern.clone(), sets)
    }

    #[test]
    fn identity_copy_is_returned_unchanged() {
        let c = construct_z2_s2_minor(3).unwrap();
        let h = host(6);
        let planted = plant(&h, &c.ball, &c.bd, &h.spec().identity());
        let p = project_free_product_minor(&h, &planted).unwrap();
        assert_eq!(p.side, Side::Left);
        assert!(h.spec().kind().is_identity(&p.coset));
        let labels = |b: &CayleyBall, bd: &BranchDecomposition| -> Vec<Vec<String>> {
            bd.sets
                .iter()
                .map(|s| {
                    let mut v: Vec<String> = s.iter().map(|x| b.spec().format(b.element(x))).collect();
                    v.sort();
                    v
                })
                .collect()
        };
        assert_eq!(labels(&p.factor_ball, &p.bd), labels(&c.ball, &c.bd));
    }

    #[test]
    fn translated_copy_is_found() {
        let c = construct_z2_s2_minor(3).unwrap();
        let h = host(7);
        let t = h.spec().parse_element("h[(1)]").unwrap();
        let planted = plant(&h, &c.ball, &c.bd, &t);
        let p = project_free_product_minor(&h, &planted).unwrap();
        assert_eq!(p.coset, t);
        assert!(verify_minor(p.factor_ball.graph(), &p.bd).pass);
    }

    #[test]
    fn cut_vertex_patterns_are_rejected() {
        let h = host(2);
        let bd = BranchDecomposition::new(
            "G3:0-1,1-2".parse::<PatternGraph>().unwrap(),
            vec![
                VertexSet::singleton(1),
                VertexSet::singleton(0),
                VertexSet::singleton(2),
            ],
        );
        assert_eq!(
            project_free_product_minor(&h, &bd).unwrap_err(),
            MinorError::PatternHasCutVertex
        );
    }
}
