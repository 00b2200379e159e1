//! Finitely generated groups given by a small algebraic term, their
//! normal-form elements, Cayley balls and the constructions built on them.
//!
//! Supported terms are free abelian groups `Z^n`, cyclic groups `Ck`, free
//! groups `Fn`, and direct and free products of those. Direct products of
//! abelian factors are flattened into one coordinate vector, so an element
//! of `Z^2 x C2` is written `(a,b,c)` with `c` taken mod 2.

mod ball;
mod collapse;
mod text;
mod vfree;

use std::fmt;

use thiserror::Error;

pub use ball::{CayleyBall, DEFAULT_BALL_CAP};
pub use collapse::{babai_collapse, lift_branch_sets, Quotient};
pub(crate) use text::split_top_level;
pub use vfree::{
    crossing_audit, virtually_free_bound, CrossingAudit, FreeWord, TreeEdge, VirtuallyFree, VirtuallyFreeBound,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("malformed element: {0}")]
    Malformed(String),
    #[error("cannot parse group spec `{input}`: {reason}")]
    BadSpec { input: String, reason: String },
    #[error("generating set contains the identity")]
    IdentityGenerator,
    #[error("generating set is not symmetric: inverse of {0} missing (add `sym`)")]
    NotSymmetric(String),
    #[error("generators do not reach standard generator {0} within the probe ball")]
    NotGenerating(String),
    #[error("Cayley ball would exceed {cap} vertices")]
    CapExceeded { cap: usize },
    #[error("collapse class {0} does not induce a connected subgraph")]
    DisconnectedClass(usize),
    #[error("collapse classes do not partition the vertices: {0}")]
    NotPartition(String),
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("{0} is not an edge of the free-group tree")]
    NotTreeEdge(String),
    #[error("{0}")]
    Unsupported(String),
}

/// Which factor of a free product a letter comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// Algebraic term describing a finitely generated group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    FreeAbelian(usize),
    Cyclic(u64),
    Free(usize),
    Direct(Box<GroupKind>, Box<GroupKind>),
    FreeProduct(Box<GroupKind>, Box<GroupKind>),
}

/// Normal-form group element.
///
/// * `Coords`: abelian coordinate groups; cyclic coordinates in `0..k`.
/// * `Word`: reduced free word, letters `±1..=n`, leftmost letter first.
/// * `Pair`: direct product with a non-abelian factor.
/// * `Alt`: free product: non-identity letters strictly alternating sides,
///   leftmost first (the word `x_n ... x_1` is stored as `[x_n, ..., x_1]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Coords(Vec<i64>),
    Word(Vec<i32>),
    Pair(Box<Element>, Box<Element>),
    Alt(Vec<Letter>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub side: Side,
    pub elem: Element,
}

impl GroupKind {
    pub fn direct(a: GroupKind, b: GroupKind) -> Self {
        GroupKind::Direct(Box::new(a), Box::new(b))
    }

    pub fn free_product(a: GroupKind, b: GroupKind) -> Self {
        GroupKind::FreeProduct(Box::new(a), Box::new(b))
    }

    /// Coordinate moduli when the group is abelian-coordinate (`0` = `Z`).
    pub fn coord_moduli(&self) -> Option<Vec<u64>> {
        match self {
            GroupKind::FreeAbelian(n) => Some(vec![0; *n]),
            GroupKind::Cyclic(k) => Some(vec![*k]),
            GroupKind::Direct(a, b) => {
                let mut m = a.coord_moduli()?;
                m.extend(b.coord_moduli()?);
                Some(m)
            }
            _ => None,
        }
    }

    pub fn factor(&self, side: Side) -> Option<&GroupKind> {
        match (self, side) {
            (GroupKind::FreeProduct(a, _), Side::Left) => Some(a),
            (GroupKind::FreeProduct(_, b), Side::Right) => Some(b),
            _ => None,
        }
    }

    pub fn identity(&self) -> Element {
        if let Some(m) = self.coord_moduli() {
            return Element::Coords(vec![0; m.len()]);
        }
        match self {
            GroupKind::Free(_) => Element::Word(Vec::new()),
            GroupKind::Direct(a, b) => Element::Pair(Box::new(a.identity()), Box::new(b.identity())),
            GroupKind::FreeProduct(..) => Element::Alt(Vec::new()),
            _ => unreachable!("coordinate groups handled above"),
        }
    }

    pub fn is_identity(&self, e: &Element) -> bool {
        match e {
            Element::Coords(c) => c.iter().all(|&x| x == 0),
            Element::Word(w) => w.is_empty(),
            Element::Alt(l) => l.is_empty(),
            Element::Pair(..) => *e == self.identity(),
        }
    }

    /// Checks that `e` is a normal form for this group.
    pub fn validate(&self, e: &Element) -> Result<(), GroupError> {
        let bad = |why: &str| Err(GroupError::Malformed(format!("{why} in {e:?}")));
        if let Some(m) = self.coord_moduli() {
            let Element::Coords(c) = e else {
                return bad("expected coordinates");
            };
            if c.len() != m.len() {
                return bad("wrong number of coordinates");
            }
            for (&x, &k) in c.iter().zip(&m) {
                if k > 0 && (x < 0 || x as u64 >= k) {
                    return bad("residue out of range");
                }
            }
            return Ok(());
        }
        match (self, e) {
            (GroupKind::Free(n), Element::Word(w)) => {
                for (i, &x) in w.iter().enumerate() {
                    if x == 0 || x.unsigned_abs() as usize > *n {
                        return bad("letter out of range");
                    }
                    if i > 0 && w[i - 1] == -x {
                        return bad("word not reduced");
                    }
                }
                Ok(())
            }
            (GroupKind::Direct(a, b), Element::Pair(x, y)) => {
                a.validate(x)?;
                b.validate(y)
            }
            (GroupKind::FreeProduct(..), Element::Alt(letters)) => {
                for (i, l) in letters.iter().enumerate() {
                    let f = self.factor(l.side).unwrap();
                    f.validate(&l.elem)?;
                    if f.is_identity(&l.elem) {
                        return bad("identity letter");
                    }
                    if i > 0 && letters[i - 1].side == l.side {
                        return bad("letters do not alternate");
                    }
                }
                Ok(())
            }
            _ => bad("element shape does not match group"),
        }
    }

    /// Group law on normal forms. Inputs are assumed valid; see
    /// [`GroupKind::multiply`] for the checked version.
    pub(crate) fn mul(&self, a: &Element, b: &Element) -> Element {
        if let Some(m) = self.coord_moduli() {
            let (Element::Coords(x), Element::Coords(y)) = (a, b) else {
                panic!("coordinate element expected");
            };
            let c = x
                .iter()
                .zip(y)
                .zip(&m)
                .map(|((&p, &q), &k)| if k == 0 { p + q } else { (p + q).rem_euclid(k as i64) })
                .collect();
            return Element::Coords(c);
        }
        match (self, a, b) {
            (GroupKind::Free(_), Element::Word(x), Element::Word(y)) => {
                let mut out = x.clone();
                for &l in y {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Element::Word(out)
            }
            (GroupKind::Direct(ka, kb), Element::Pair(x1, y1), Element::Pair(x2, y2)) => {
                Element::Pair(Box::new(ka.mul(x1, x2)), Box::new(kb.mul(y1, y2)))
            }
            (GroupKind::FreeProduct(..), Element::Alt(x), Element::Alt(y)) => {
                let mut out = x.clone();
                for l in y {
                    self.push_letter(&mut out, l.clone());
                }
                Element::Alt(out)
            }
            _ => panic!("element shape does not match group"),
        }
    }

    fn push_letter(&self, out: &mut Vec<Letter>, letter: Letter) {
        if let Some(last) = out.last_mut() {
            if last.side == letter.side {
                let f = self.factor(letter.side).unwrap();
                let merged = f.mul(&last.elem, &letter.elem);
                if f.is_identity(&merged) {
                    out.pop();
                } else {
                    last.elem = merged;
                }
                return;
            }
        }
        out.push(letter);
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.mul(a, b))
    }

    pub(crate) fn inv(&self, a: &Element) -> Element {
        if let Some(m) = self.coord_moduli() {
            let Element::Coords(x) = a else {
                panic!("coordinate element expected");
            };
            let c = x
                .iter()
                .zip(&m)
                .map(|(&p, &k)| if k == 0 { -p } else { (-p).rem_euclid(k as i64) })
                .collect();
            return Element::Coords(c);
        }
        match (self, a) {
            (GroupKind::Free(_), Element::Word(w)) => Element::Word(w.iter().rev().map(|&l| -l).collect()),
            (GroupKind::Direct(ka, kb), Element::Pair(x, y)) => Element::Pair(Box::new(ka.inv(x)), Box::new(kb.inv(y))),
            (GroupKind::FreeProduct(..), Element::Alt(letters)) => Element::Alt(
                letters
                    .iter()
                    .rev()
                    .map(|l| Letter {
                        side: l.side,
                        elem: self.factor(l.side).unwrap().inv(&l.elem),
                    })
                    .collect(),
            ),
            _ => panic!("element shape does not match group"),
        }
    }

    pub fn inverse(&self, a: &Element) -> Result<Element, GroupError> {
        self.validate(a)?;
        Ok(self.inv(a))
    }

    /// `a^k` by repeated squaring.
    pub fn pow(&self, a: &Element, k: i64) -> Element {
        let mut base = if k < 0 { self.inv(a) } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Embeds a factor element as a one-letter free-product word.
    pub fn embed(&self, side: Side, e: Element) -> Element {
        let f = self.factor(side).expect("free product");
        if f.is_identity(&e) {
            Element::Alt(Vec::new())
        } else {
            Element::Alt(vec![Letter { side, elem: e }])
        }
    }

    /// The standard symmetric generating set: unit vectors and their
    /// negatives, a cyclic generator (and its inverse), free basis letters
    /// and inverses; products take the union of embedded factor sets.
    pub fn standard_gens(&self) -> Vec<Element> {
        let mut out = Vec::new();
        if let Some(m) = self.coord_moduli() {
            for (i, &k) in m.iter().enumerate() {
                if k == 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let mut c = vec![0; m.len()];
                    c[i] = if k == 0 { sign } else { sign.rem_euclid(k as i64) };
                    let e = Element::Coords(c);
                    if !out.contains(&e) {
                        out.push(e);
                    }
                }
            }
            return out;
        }
        match self {
            GroupKind::Free(n) => {
                for i in 1..=*n as i32 {
                    out.push(Element::Word(vec![i]));
                    out.push(Element::Word(vec![-i]));
                }
            }
            GroupKind::Direct(a, b) => {
                for g in a.standard_gens() {
                    out.push(Element::Pair(Box::new(g), Box::new(b.identity())));
                }
                for h in b.standard_gens() {
                    out.push(Element::Pair(Box::new(a.identity()), Box::new(h)));
                }
            }
            GroupKind::FreeProduct(a, b) => {
                for g in a.standard_gens() {
                    out.push(self.embed(Side::Left, g));
                }
                for h in b.standard_gens() {
                    out.push(self.embed(Side::Right, h));
                }
            }
            _ => unreachable!(),
        }
        out
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(k: &GroupKind, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match k {
                GroupKind::Direct(..) | GroupKind::FreeProduct(..) => write!(f, "({k})"),
                _ => write!(f, "{k}"),
            }
        }
        match self {
            GroupKind::FreeAbelian(1) => write!(f, "Z"),
            GroupKind::FreeAbelian(n) => write!(f, "Z^{n}"),
            GroupKind::Cyclic(k) => write!(f, "C{k}"),
            GroupKind::Free(n) => write!(f, "F{n}"),
            GroupKind::Direct(a, b) => {
                operand(a, f)?;
                write!(f, " x ")?;
                operand(b, f)
            }
            GroupKind::FreeProduct(a, b) => {
                operand(a, f)?;
                write!(f, " * ")?;
                operand(b, f)
            }
        }
    }
}

/// A group together with a finite symmetric generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    kind: GroupKind,
    gens: Vec<Element>,
}

/// Elements explored when checking that a generating set reaches the
/// standard generators.
const GENERATION_PROBE: usize = 20_000;

impl GroupSpec {
    /// Validates `gens` (normal forms, no identity, symmetric unless
    /// `close_symmetric`, generates the group at desk scale). Duplicates are
    /// dropped, first occurrence wins.
    pub fn new(kind: GroupKind, gens: Vec<Element>, close_symmetric: bool) -> Result<Self, GroupError> {
        let mut list: Vec<Element> = Vec::new();
        for g in gens {
            kind.validate(&g)?;
            if kind.is_identity(&g) {
                return Err(GroupError::IdentityGenerator);
            }
            if !list.contains(&g) {
                list.push(g);
            }
        }
        if close_symmetric {
            let mut i = 0;
            while i < list.len() {
                let inv = kind.inv(&list[i]);
                if !list.contains(&inv) {
                    list.insert(i + 1, inv);
                }
                i += 1;
            }
        } else if let Some(g) = list.iter().find(|g| !list.contains(&kind.inv(g))) {
            return Err(GroupError::NotSymmetric(kind.format(g)));
        }
        let spec = GroupSpec { kind, gens: list };
        spec.check_generates()?;
        Ok(spec)
    }

    /// The group with its standard generating set.
    pub fn standard(kind: GroupKind) -> Self {
        let gens = kind.standard_gens();
        GroupSpec { kind, gens }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn gens(&self) -> &[Element] {
        &self.gens
    }

    fn check_generates(&self) -> Result<(), GroupError> {
        let mut targets: Vec<Element> = self.kind.standard_gens();
        let mut seen = std::collections::HashSet::new();
        let id = self.kind.identity();
        seen.insert(id.clone());
        let mut frontier = vec![id];
        targets.retain(|t| !seen.contains(t));
        while !targets.is_empty() && !frontier.is_empty() && seen.len() < GENERATION_PROBE {
            let mut next = Vec::new();
            for v in &frontier {
                for s in &self.gens {
                    let u = self.kind.mul(s, v);
                    if seen.insert(u.clone()) {
                        next.push(u);
                    }
                }
            }
            targets.retain(|t| !seen.contains(t));
            frontier = next;
        }
        match targets.first() {
            None => Ok(()),
            Some(t) => Err(GroupError::NotGenerating(self.kind.format(t))),
        }
    }

    pub fn identity(&self) -> Element {
        self.kind.identity()
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        self.kind.multiply(a, b)
    }

    pub fn inverse(&self, a: &Element) -> Result<Element, GroupError> {
        self.kind.inverse(a)
    }

    pub fn parse_element(&self, s: &str) -> Result<Element, GroupError> {
        self.kind.parse(s)
    }

    pub fn format(&self, e: &Element) -> String {
        self.kind.format(e)
    }

    /// Same group, generating set replaced by `S ∪ SS ∪ SSS` without the
    /// identity and without repeated normal forms.
    pub fn enlarged(&self) -> GroupSpec {
        enlarged_generating_set(self)
    }
}

/// `S0 ∪ S0S0 ∪ S0S0S0` with the identity removed and duplicates merged,
/// in first-seen order. The result is symmetric whenever `S0` is.
pub fn enlarged_generating_set(spec: &GroupSpec) -> GroupSpec {
    let k = spec.kind();
    let mut out: Vec<Element> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut push = |e: Element| {
        if !k.is_identity(&e) && seen.insert(e.clone()) {
            out.push(e);
        }
    };
    for a in spec.gens() {
        push(a.clone());
    }
    for a in spec.gens() {
        for b in spec.gens() {
            push(k.mul(a, b));
        }
    }
    for a in spec.gens() {
        for b in spec.gens() {
            let ab = k.mul(a, b);
            for c in spec.gens() {
                push(k.mul(&ab, c));
            }
        }
    }
    GroupSpec {
        kind: k.clone(),
        gens: out,
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| self.kind.format(g)).collect();
        write!(f, "{} | gens={}", self.kind, gens.join(","))
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        text::parse_spec(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> GroupKind {
        GroupKind::FreeAbelian(2)
    }

    fn z2_z3() -> GroupKind {
        GroupKind::free_product(GroupKind::Cyclic(2), GroupKind::Cyclic(3))
    }

    fn t() -> Element {
        z2_z3().embed(Side::Left, Element::Coords(vec![1]))
    }

    fn c(k: i64) -> Element {
        z2_z3().embed(Side::Right, Element::Coords(vec![k]))
    }

    #[test]
    fn abelian_law() {
        let k = z2();
        let p = k
            .multiply(&Element::Coords(vec![1, 0]), &Element::Coords(vec![0, 1]))
            .unwrap();
        assert_eq!(p, Element::Coords(vec![1, 1]));
        assert_eq!(
            k.inverse(&Element::Coords(vec![2, -1])).unwrap(),
            Element::Coords(vec![-2, 1])
        );
        assert!(k.multiply(&Element::Coords(vec![1]), &k.identity()).is_err());
    }

    #[test]
    fn free_product_reduction() {
        let k = z2_z3();
        assert_eq!(k.multiply(&t(), &t()).unwrap(), k.identity());
        let tc = k.mul(&t(), &c(1));
        let tc2 = k.multiply(&tc, &c(1)).unwrap();
        assert_eq!(tc2, k.mul(&t(), &c(2)));
        // (t c)^-1 = c^-1 t = c^2 t
        assert_eq!(k.inverse(&tc).unwrap(), k.mul(&c(2), &t()));
        // cancellation cascades across the junction
        let w = k.mul(&k.mul(&t(), &c(1)), &t());
        let winv = k.inv(&w);
        assert_eq!(k.mul(&w, &winv), k.identity());
    }

    #[test]
    fn free_group_inverse() {
        let k = GroupKind::Free(2);
        let x1x2 = Element::Word(vec![1, 2]);
        assert_eq!(k.inverse(&x1x2).unwrap(), Element::Word(vec![-2, -1]));
        assert!(k.validate(&Element::Word(vec![1, -1])).is_err());
        assert!(k.validate(&Element::Word(vec![3])).is_err());
    }

    #[test]
    fn malformed_free_product_words() {
        let k = z2_z3();
        let bad = Element::Alt(vec![
            Letter {
                side: Side::Left,
                elem: Element::Coords(vec![1]),
            },
            Letter {
                side: Side::Left,
                elem: Element::Coords(vec![1]),
            },
        ]);
        assert!(k.validate(&bad).is_err());
        let idl = Element::Alt(vec![Letter {
            side: Side::Right,
            elem: Element::Coords(vec![0]),
        }]);
        assert!(k.validate(&idl).is_err());
    }

    #[test]
    fn powers() {
        let k = GroupKind::Free(1);
        assert_eq!(k.pow(&Element::Word(vec![1]), -3), Element::Word(vec![-1, -1, -1]));
        let c3 = GroupKind::Cyclic(3);
        assert_eq!(c3.pow(&Element::Coords(vec![1]), 4), Element::Coords(vec![1]));
    }

    #[test]
    fn spec_validation() {
        let k = z2();
        let e = |x, y| Element::Coords(vec![x, y]);
        assert_eq!(
            GroupSpec::new(k.clone(), vec![e(0, 0), e(1, 0)], true),
            Err(GroupError::IdentityGenerator)
        );
        assert!(matches!(
            GroupSpec::new(k.clone(), vec![e(1, 0), e(0, 1)], false),
            Err(GroupError::NotSymmetric(_))
        ));
        assert!(matches!(
            GroupSpec::new(k.clone(), vec![e(2, 0), e(0, 1)], true),
            Err(GroupError::NotGenerating(_))
        ));
        let s2 = GroupSpec::new(k, vec![e(1, 0), e(2, 0), e(0, 1)], true).unwrap();
        assert_eq!(s2.gens().len(), 6);
    }

    #[test]
    fn enlarged_sets() {
        let s1 = GroupSpec::standard(z2());
        let big = enlarged_generating_set(&s1);
        assert_eq!(big.gens().len(), 24);
        for g in big.gens() {
            let Element::Coords(c) = g else { panic!() };
            assert!(c[0].abs() + c[1].abs() <= 3);
        }
        let c2 = GroupSpec::standard(GroupKind::Cyclic(2));
        assert_eq!(c2.gens(), &[Element::Coords(vec![1])]);
        assert_eq!(enlarged_generating_set(&c2).gens(), &[Element::Coords(vec![1])]);
        let f1 = enlarged_generating_set(&GroupSpec::standard(GroupKind::Free(1)));
        let mut words: Vec<_> = f1.gens().to_vec();
        words.sort();
        assert_eq!(words.len(), 6);
        assert!(words.contains(&Element::Word(vec![-1, -1, -1])));
        assert!(words.contains(&Element::Word(vec![1, 1])));
    }
}
