//! Text forms of groups and elements.
//!
//! Group terms: `Z`, `Z^n`, `Ck`, `Fn`, `A x B` (direct), `A * B` (free),
//! parentheses for grouping; `x` binds tighter than `*`. A spec string adds
//! a generating set: `Z^2 | gens=(1,0),(2,0),(0,1),sym`, where `sym` closes
//! the list under inverses and `gens=auto` (or `basis`) picks the standard set.
//!
//! Elements:
//! * coordinate groups: `(a,b,...)`
//! * free groups: letters `a`, `b`, ... with upper case for inverses; `1`
//! * direct products with a non-abelian factor: `<x;y>`
//! * free products: `1` or letters `g[...]` (left factor) and `h[...]`
//!   (right factor) joined by `.`, leftmost first, e.g. `g[(1,0)].h[(1)]`.

use super::{Element, GroupError, GroupKind, GroupSpec, Letter, Side};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected `{c}` at byte {}", self.pos))
        }
    }

    fn integer(&mut self) -> Result<i64, String> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+')))
            .count();
        rest[..len]
            .parse()
            .inspect(|_| self.pos += len)
            .map_err(|_| format!("expected integer at byte {}", self.pos))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

fn parse_kind_expr(c: &mut Cursor) -> Result<GroupKind, String> {
    let mut left = parse_kind_term(c)?;
    while c.eat('*') {
        let right = parse_kind_term(c)?;
        left = GroupKind::free_product(left, right);
    }
    Ok(left)
}

fn parse_kind_term(c: &mut Cursor) -> Result<GroupKind, String> {
    let mut left = parse_kind_atom(c)?;
    while c.peek() == Some('x') || c.peek() == Some('×') {
        c.pos += c.rest().chars().next().unwrap().len_utf8();
        let right = parse_kind_atom(c)?;
        left = GroupKind::direct(left, right);
    }
    Ok(left)
}

fn parse_kind_atom(c: &mut Cursor) -> Result<GroupKind, String> {
    if c.eat('(') {
        let k = parse_kind_expr(c)?;
        c.expect(')')?;
        return Ok(k);
    }
    let size = |c: &mut Cursor| -> Result<i64, String> {
        let v = c.integer()?;
        if v < 1 {
            return Err(format!("size must be positive, got {v}"));
        }
        Ok(v)
    };
    if c.eat('Z') {
        if c.eat('^') {
            return Ok(GroupKind::FreeAbelian(size(c)? as usize));
        }
        return Ok(GroupKind::FreeAbelian(1));
    }
    if c.eat('C') {
        let k = size(c)?;
        if k < 2 {
            return Err("cyclic groups need order at least 2".into());
        }
        return Ok(GroupKind::Cyclic(k as u64));
    }
    if c.eat('F') {
        let n = size(c)?;
        if n > 26 {
            return Err("free groups of rank above 26 are not supported".into());
        }
        return Ok(GroupKind::Free(n as usize));
    }
    Err(format!("unexpected input at byte {}", c.pos))
}

impl std::str::FromStr for GroupKind {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor::new(s);
        let spec_err = |reason: String| GroupError::BadSpec {
            input: s.to_string(),
            reason,
        };
        let k = parse_kind_expr(&mut c).map_err(spec_err)?;
        if !c.at_end() {
            return Err(spec_err(format!("trailing input at byte {}", c.pos)));
        }
        Ok(k)
    }
}

/// Splits on commas that are not nested inside brackets.
pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '<' => depth += 1,
            ')' | ']' | '>' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|p| !p.is_empty());
    out
}

pub(super) fn parse_spec(s: &str) -> Result<GroupSpec, GroupError> {
    let (kind_part, opts) = match s.split_once('|') {
        Some((k, o)) => (k, o.trim()),
        None => (s, ""),
    };
    let kind: GroupKind = kind_part.trim().parse().map_err(|e| match e {
        GroupError::BadSpec { reason, .. } => GroupError::BadSpec {
            input: s.to_string(),
            reason,
        },
        other => other,
    })?;
    if opts.is_empty() {
        return Ok(GroupSpec::standard(kind));
    }
    let Some(list) = opts.strip_prefix("gens=") else {
        return Err(GroupError::BadSpec {
            input: s.to_string(),
            reason: format!("unknown option `{opts}`"),
        });
    };
    let list = list.trim();
    if matches!(list, "auto" | "basis" | "standard") {
        return Ok(GroupSpec::standard(kind));
    }
    let mut sym = false;
    let mut gens = Vec::new();
    for item in split_top_level(list) {
        if item == "sym" {
            sym = true;
        } else {
            gens.push(kind.parse(item)?);
        }
    }
    GroupSpec::new(kind, gens, sym)
}

impl GroupKind {
    /// Parses an element and returns its normal form.
    pub fn parse(&self, s: &str) -> Result<Element, GroupError> {
        let mut c = Cursor::new(s);
        let e = self
            .parse_at(&mut c)
            .map_err(|why| GroupError::Malformed(format!("`{s}`: {why}")))?;
        if !c.at_end() {
            return Err(GroupError::Malformed(format!(
                "`{s}`: trailing input at byte {}",
                c.pos
            )));
        }
        Ok(e)
    }

    fn parse_at(&self, c: &mut Cursor) -> Result<Element, String> {
        if let Some(m) = self.coord_moduli() {
            c.expect('(')?;
            let mut coords = Vec::with_capacity(m.len());
            for (i, &k) in m.iter().enumerate() {
                if i > 0 {
                    c.expect(',')?;
                }
                let v = c.integer()?;
                coords.push(if k == 0 { v } else { v.rem_euclid(k as i64) });
            }
            c.expect(')')?;
            return Ok(Element::Coords(coords));
        }
        match self {
            GroupKind::Free(n) => {
                if c.eat('1') {
                    return Ok(self.identity());
                }
                c.skip_ws();
                let mut letters = Vec::new();
                while let Some(ch) = c.rest().chars().next().filter(|ch| ch.is_ascii_alphabetic()) {
                    let idx = (ch.to_ascii_lowercase() as u8 - b'a') as i32 + 1;
                    if idx as usize > *n {
                        return Err(format!("letter `{ch}` outside rank {n}"));
                    }
                    letters.push(if ch.is_ascii_uppercase() { -idx } else { idx });
                    c.pos += 1;
                }
                if letters.is_empty() {
                    return Err(format!("expected a free word at byte {}", c.pos));
                }
                Ok(letters
                    .into_iter()
                    .fold(self.identity(), |acc, l| self.mul(&acc, &Element::Word(vec![l]))))
            }
            GroupKind::Direct(a, b) => {
                c.expect('<')?;
                let x = a.parse_at(c)?;
                c.expect(';')?;
                let y = b.parse_at(c)?;
                c.expect('>')?;
                Ok(Element::Pair(Box::new(x), Box::new(y)))
            }
            GroupKind::FreeProduct(..) => {
                if c.eat('1') {
                    return Ok(self.identity());
                }
                let mut acc = self.identity();
                loop {
                    let side = if c.eat('g') {
                        Side::Left
                    } else if c.eat('h') {
                        Side::Right
                    } else {
                        return Err(format!("expected `g[` or `h[` at byte {}", c.pos));
                    };
                    c.expect('[')?;
                    let inner = self.factor(side).unwrap().parse_at(c)?;
                    c.expect(']')?;
                    acc = self.mul(&acc, &self.embed(side, inner));
                    if !c.eat('.') {
                        break;
                    }
                }
                Ok(acc)
            }
            _ => unreachable!(),
        }
    }

    /// Canonical text of a normal-form element (inverse of [`GroupKind::parse`]).
    pub fn format(&self, e: &Element) -> String {
        match (self, e) {
            (_, Element::Coords(c)) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            }
            (_, Element::Word(w)) if w.is_empty() => "1".into(),
            (_, Element::Word(w)) => w
                .iter()
                .map(|&l| {
                    let ch = (b'a' + (l.unsigned_abs() as u8) - 1) as char;
                    if l < 0 {
                        ch.to_ascii_uppercase()
                    } else {
                        ch
                    }
                })
                .collect(),
            (GroupKind::Direct(a, b), Element::Pair(x, y)) => {
                format!("<{};{}>", a.format(x), b.format(y))
            }
            (_, Element::Alt(l)) if l.is_empty() => "1".into(),
            (_, Element::Alt(letters)) => letters
                .iter()
                .map(|Letter { side, elem }| {
                    let tag = match side {
                        Side::Left => 'g',
                        Side::Right => 'h',
                    };
                    format!("{tag}[{}]", self.factor(*side).unwrap().format(elem))
                })
                .collect::<Vec<_>>()
                .join("."),
            _ => format!("{e:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_parse_with_precedence() {
        let k: GroupKind = "Z^2 x C2 * F2".parse().unwrap();
        assert_eq!(
            k,
            GroupKind::free_product(
                GroupKind::direct(GroupKind::FreeAbelian(2), GroupKind::Cyclic(2)),
                GroupKind::Free(2)
            )
        );
        assert_eq!(k.to_string(), "(Z^2 x C2) * F2");
        assert_eq!(k.to_string().parse::<GroupKind>().unwrap(), k);
        assert!("Z^".parse::<GroupKind>().is_err());
        assert!("C1".parse::<GroupKind>().is_err());
        assert!("Q8".parse::<GroupKind>().is_err());
    }

    #[test]
    fn spec_strings() {
        let s: GroupSpec = "Z^2 | gens=(1,0),(2,0),(0,1),sym".parse().unwrap();
        assert_eq!(s.gens().len(), 6);
        let again: GroupSpec = s.to_string().parse().unwrap();
        assert_eq!(again, s);
        let f: GroupSpec = "F2 | gens=basis".parse().unwrap();
        assert_eq!(f.gens().len(), 4);
        let z: GroupSpec = "Z^2 * C2 | gens=auto".parse().unwrap();
        assert_eq!(z.gens().len(), 5);
        assert!("Z^2 | gens=(1,0),(0,1)".parse::<GroupSpec>().is_err());
        assert!("Z^2 | colour=red".parse::<GroupSpec>().is_err());
        assert!("Z^2 | gens=(1,0,0),sym".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn element_text_round_trips() {
        let k: GroupKind = "(Z^2 x C3) * (F2 x Z)".parse().unwrap();
        for txt in ["1", "g[(1,-2,2)]", "h[<aB;(3)>].g[(0,0,1)]", "g[(1,0,0)].h[<1;(1)>]"] {
            let e = k.parse(txt).unwrap();
            k.validate(&e).unwrap();
            assert_eq!(k.format(&e), txt);
        }
        // non-normal input is normalized
        let f2 = GroupKind::Free(2);
        assert_eq!(f2.format(&f2.parse("abBa").unwrap()), "aa");
        let c3 = GroupKind::Cyclic(3);
        assert_eq!(c3.parse("(-1)").unwrap(), Element::Coords(vec![2]));
        let fp: GroupKind = "C2 * C2".parse().unwrap();
        assert_eq!(fp.parse("g[(1)].g[(1)]").unwrap(), fp.identity());
        assert!(f2.parse("c").is_err());
        assert!(fp.parse("g[(1)]h[(1)]").is_err());
    }

    #[test]
    fn top_level_split() {
        assert_eq!(split_top_level("(1,0),(2,0), sym"), vec!["(1,0)", "(2,0)", "sym"]);
        assert_eq!(split_top_level("g[(1,0)].h[(1)],1"), vec!["g[(1,0)].h[(1)]", "1"]);
    }
}
