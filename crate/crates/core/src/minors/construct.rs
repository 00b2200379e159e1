//! The explicit clique-minor families on `Z^2` with a doubled horizontal
//! step and on `Z^2 x C` for any generating set.

use super::{BranchDecomposition, MinorError};
use crate::graph::VertexSet;
use crate::groups::{CayleyBall, Element, GroupSpec};

/// A host ball together with a decomposition living in it.
#[derive(Clone, Debug)]
pub struct ConstructedMinor {
    pub ball: CayleyBall,
    pub bd: BranchDecomposition,
}

/// `Z^2` with generators `(±1,0), (±2,0), (0,±1)`.
pub fn z2_s2_spec() -> GroupSpec {
    "Z^2 | gens=(1,0),(2,0),(0,1),sym"
        .parse()
        .expect("built-in spec is valid")
}

fn sets_in_ball(ball: &CayleyBall, sets: Vec<Vec<Element>>) -> Result<Vec<VertexSet>, MinorError> {
    sets.into_iter()
        .map(|set| {
            set.iter()
                .map(|e| {
                    ball.vertex_of(e).ok_or_else(|| {
                        MinorError::Precondition(format!(
                            "{} lies outside the ball of radius {}",
                            ball.spec().format(e),
                            ball.radius()
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(VertexSet::from)
        })
        .collect()
}

/// `K_m` in the ball of radius `3m+2` of `Cay(Z^2, S_2)`:
/// `V_1 = {(2,1), (4,1), ..., (2m,1)}` and, for `k >= 2`,
/// `V_k = {(2k-1,1), ..., (2k-1,k)} ∪ {(2k,k), (2k+2,k), ..., (2m,k)}`.
pub fn construct_z2_s2_minor(m: usize) -> Result<ConstructedMinor, MinorError> {
    if m == 0 {
        return Err(MinorError::ZeroOrder);
    }
    let spec = z2_s2_spec();
    let ball = CayleyBall::new(&spec, 3 * m + 2)?;
    let p = |x: usize, y: usize| Element::Coords(vec![x as i64, y as i64]);
    let mut sets = vec![(1..=m).map(|x| p(2 * x, 1)).collect::<Vec<_>>()];
    for k in 2..=m {
        let mut v: Vec<Element> = (1..=k).map(|y| p(2 * k - 1, y)).collect();
        v.extend((k..=m).map(|x| p(2 * x, k)));
        sets.push(v);
    }
    let sets = sets_in_ball(&ball, sets)?;
    Ok(ConstructedMinor {
        ball,
        bd: BranchDecomposition::clique(sets),
    })
}

/// `K_m` in a Cayley ball of an abelian group containing `⟨s1,s2⟩ ≅ Z^2`
/// and `s3 ∉ ⟨s1,s2⟩`, with `s1, s2, s3` among the generators:
/// `V_1 = {l s1 : 1 <= l <= m}` and, for `k >= 2`,
/// `V_k = {k s1 + j s2 + s3 : 0 <= j < k} ∪ {l s1 + (k-1) s2 : k <= l <= m}`.
///
/// The subgroup conditions are checked for coefficients up to
/// `max(2m+2, 8)` in absolute value.
pub fn construct_z2xc_minor(
    m: usize,
    spec: &GroupSpec,
    s1: &Element,
    s2: &Element,
    s3: &Element,
) -> Result<ConstructedMinor, MinorError> {
    if m == 0 {
        return Err(MinorError::ZeroOrder);
    }
    let kind = spec.kind();
    if kind.coord_moduli().is_none() {
        return Err(MinorError::Precondition(format!(
            "{kind} is not an abelian coordinate group"
        )));
    }
    for (name, s) in [("s1", s1), ("s2", s2), ("s3", s3)] {
        kind.validate(s)?;
        if !spec.gens().contains(s) {
            return Err(MinorError::Precondition(format!(
                "{name} = {} is not a generator",
                spec.format(s)
            )));
        }
    }
    let comb = |a: i64, b: i64, c: i64| {
        let x = kind.mul(&kind.pow(s1, a), &kind.pow(s2, b));
        kind.mul(&x, &kind.pow(s3, c))
    };
    let probe = (2 * m as i64 + 2).max(8);
    for a in -probe..=probe {
        for b in -probe..=probe {
            if (a, b) != (0, 0) && kind.is_identity(&comb(a, b, 0)) {
                return Err(MinorError::Precondition(format!(
                    "{a} s1 + {b} s2 = 0, so <s1,s2> is not free abelian of rank 2"
                )));
            }
            if comb(a, b, 0) == *s3 {
                return Err(MinorError::Precondition(format!("s3 = {a} s1 + {b} s2")));
            }
        }
    }

    let ball = CayleyBall::new(spec, 2 * m + 1)?;
    let m = m as i64;
    let mut sets = vec![(1..=m).map(|l| comb(l, 0, 0)).collect::<Vec<_>>()];
    for k in 2..=m {
        let mut v: Vec<Element> = (0..k).map(|j| comb(k, j, 1)).collect();
        v.extend((k..=m).map(|l| comb(l, k - 1, 0)));
        sets.push(v);
    }
    let sets = sets_in_ball(&ball, sets)?;
    Ok(ConstructedMinor {
        ball,
        bd: BranchDecomposition::clique(sets),
    })
}
