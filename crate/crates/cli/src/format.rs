//! The `.gsmod` text format: a ring block, a module presentation and named ideals.
//!
//! ```text
//! file      := (line '\n')*
//! line      := blank | '#' comment | directive
//! directive := 'field' FIELD
//!            | 'order' ('degrevlex' | 'lex' | 'block')
//!            | 'basevars' NAME*
//!            | 'fibervars' NAME*
//!            | 'baserels' POLY (',' POLY)*
//!            | 'gens' BIDEG*
//!            | 'rels'
//!            | '[' POLY (',' POLY)* ']' BIDEG?        rows, only after 'rels'
//!            | 'ideal' NAME '=' POLY (',' POLY)*
//! FIELD     := 'Q' | 'QQ' | 'F' PRIME | 'GF(' PRIME ')'
//! BIDEG     := '(' INT ')' | '(' INT '|' INT ')'       fiber degree, then base degree
//! ```
//!
//! Variable declarations and `order` come before any polynomial. A relation row has one entry
//! per generator; entry `k` must have bidegree `T - twist_k` for a common row twist `T`, which
//! the optional trailing bidegree states explicitly.

use std::fmt;
use std::sync::Arc;

use gstab_core::{Bidegree, Field, FreeModule, Module, MonomialOrder, Poly, PolyRing, RingContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationRow {
    pub entries: Vec<Poly>,
    pub twist: Option<Bidegree>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedIdeal {
    pub name: String,
    pub gens: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleFile {
    pub field: Field,
    pub order: MonomialOrder,
    pub base_vars: Vec<String>,
    pub fiber_vars: Vec<String>,
    pub base_rels: Vec<Poly>,
    pub gens: Vec<Bidegree>,
    pub rels: Vec<RelationRow>,
    pub ideals: Vec<NamedIdeal>,
    ring: Arc<PolyRing>,
}

impl ModuleFile {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn context(&self) -> Arc<RingContext> {
        RingContext::new(self.ring.clone(), self.base_rels.clone()).expect("checked at parse time")
    }

    pub fn module(&self) -> Module {
        let ctx = self.context();
        let free = FreeModule::new(&self.ring, self.gens.clone());
        let rels = self.rels.iter().map(|r| free.from_polys(&r.entries)).collect();
        Module::new(&ctx, self.gens.clone(), rels).expect("checked at parse time")
    }

    pub fn ideal(&self, name: &str) -> Option<&NamedIdeal> {
        self.ideals.iter().find(|i| i.name == name)
    }
}

fn order_name(o: MonomialOrder) -> &'static str {
    match o {
        MonomialOrder::DegRevLex => "degrevlex",
        MonomialOrder::Lex => "lex",
        MonomialOrder::Block => "block",
    }
}

fn fmt_bideg(b: Bidegree) -> String {
    format!("({}|{})", b.fiber, b.base)
}

fn join(ps: &[Poly]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

/// Canonical text; parsing it gives back an equal `ModuleFile`.
pub fn print_module_file(f: &ModuleFile) -> String {
    let mut out = String::new();
    let field = match f.field {
        Field::Rational => "Q".to_string(),
        Field::Prime(p) => format!("GF({p})"),
    };
    out.push_str(&format!("field {field}\n"));
    if f.order != MonomialOrder::DegRevLex {
        out.push_str(&format!("order {}\n", order_name(f.order)));
    }
    if !f.base_vars.is_empty() {
        out.push_str(&format!("basevars {}\n", f.base_vars.join(" ")));
    }
    out.push_str(&format!("fibervars {}\n", f.fiber_vars.join(" ")).trim_end().to_string());
    out.push('\n');
    if !f.base_rels.is_empty() {
        out.push_str(&format!("baserels {}\n", join(&f.base_rels)));
    }
    let gens: Vec<String> = f.gens.iter().map(|&b| fmt_bideg(b)).collect();
    out.push_str(format!("gens {}", gens.join(" ")).trim_end());
    out.push('\n');
    out.push_str("rels\n");
    for r in &f.rels {
        out.push_str(&format!("[{}]", join(&r.entries)));
        if let Some(t) = r.twist {
            out.push_str(&format!(" {}", fmt_bideg(t)));
        }
        out.push('\n');
    }
    for i in &f.ideals {
        out.push_str(&format!("ideal {} = {}\n", i.name, join(&i.gens)));
    }
    out
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    /// Byte offset of `text` within the line.
    start: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, at: usize, message: impl Into<String>) -> ParseError {
        let col = self.text[..at.min(self.text.len())].chars().count() + 1;
        ParseError { line: self.line, col: col + self.start, message: message.into() }
    }
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits at top-level commas, returning `(offset, piece)` with surrounding spaces trimmed.
fn split_commas(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut begin = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((begin, &s[begin..i]));
                begin = i + 1;
            }
            _ => {}
        }
    }
    out.push((begin, &s[begin..]));
    out.into_iter()
        .map(|(o, p)| {
            let lead = p.len() - p.trim_start().len();
            (o + lead, p.trim())
        })
        .collect()
}

fn parse_field(c: &Cursor, s: &str, at: usize) -> Result<Field, ParseError> {
    let p = match s {
        "Q" | "QQ" => return Ok(Field::Rational),
        _ if s.starts_with("GF(") && s.ends_with(')') => &s[3..s.len() - 1],
        _ if s.starts_with('F') => &s[1..],
        _ => return Err(c.err(at, format!("unknown field {s:?}; expected Q, F<p> or GF(<p>)"))),
    };
    let p: u32 = p.parse().map_err(|_| c.err(at, format!("bad characteristic in {s:?}")))?;
    Field::prime(p).map_err(|e| c.err(at, e.to_string()))
}

fn parse_bidegrees(c: &Cursor, s: &str, base: usize) -> Result<Vec<Bidegree>, ParseError> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        if b[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if b[i] != b'(' {
            return Err(c.err(base + i, "expected a bidegree like (1) or (1|0)"));
        }
        let close = s[i..].find(')').map(|k| i + k).ok_or_else(|| c.err(base + i, "unclosed bidegree"))?;
        let inner = &s[i + 1..close];
        let (f, bs) = match inner.split_once('|') {
            Some((f, bs)) => (f, Some(bs)),
            None => (inner, None),
        };
        let num = |t: &str| -> Result<i32, ParseError> { t.trim().parse().map_err(|_| c.err(base + i + 1, format!("bad degree {t:?}"))) };
        out.push(Bidegree::new(num(f)?, bs.map(num).transpose()?.unwrap_or(0)));
        i = close + 1;
    }
    Ok(out)
}

fn poly_at(c: &Cursor, ring: &Arc<PolyRing>, s: &str, at: usize) -> Result<Poly, ParseError> {
    if s.is_empty() {
        return Err(c.err(at, "empty polynomial"));
    }
    Poly::parse(ring, s).map_err(|e| c.err(at + e.offset, e.message))
}

fn bihomogeneous(c: &Cursor, p: &Poly, at: usize) -> Result<(), ParseError> {
    if p.is_bihomogeneous() {
        Ok(())
    } else {
        Err(c.err(at, format!("{p} is not bihomogeneous")))
    }
}

#[derive(Default)]
struct Builder {
    field: Option<Field>,
    order: Option<MonomialOrder>,
    base_vars: Option<Vec<String>>,
    fiber_vars: Option<Vec<String>>,
    ring: Option<Arc<PolyRing>>,
    base_rels: Vec<Poly>,
    gens: Option<Vec<Bidegree>>,
    in_rels: bool,
    rels: Vec<RelationRow>,
    ideals: Vec<NamedIdeal>,
}

impl Builder {
    fn ring(&mut self, c: &Cursor, at: usize) -> Result<Arc<PolyRing>, ParseError> {
        if let Some(r) = &self.ring {
            return Ok(r.clone());
        }
        let field = self.field.ok_or_else(|| c.err(at, "'field' must come before any polynomial"))?;
        let fiber = self.fiber_vars.clone().ok_or_else(|| c.err(at, "'fibervars' must come before any polynomial"))?;
        let base = self.base_vars.clone().unwrap_or_default();
        let mut names = base.clone();
        names.extend(fiber);
        let r = PolyRing::from_names(field, names, base.len(), self.order.unwrap_or(MonomialOrder::DegRevLex))
            .map_err(|e| c.err(at, e.to_string()))?;
        self.ring = Some(r.clone());
        Ok(r)
    }
}

pub fn parse_module_file(text: &str) -> Result<ModuleFile, ParseError> {
    let mut b = Builder::default();
    let mut seen_names: Vec<String> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        let start = body.len() - trimmed.len();
        let s = trimmed.trim_end();
        let c = Cursor { line: ln + 1, text: s, start };
        if s.is_empty() {
            continue;
        }
        if s.starts_with('[') {
            if !b.in_rels {
                return Err(c.err(0, "relation row outside a 'rels' block"));
            }
            let ring = b.ring(&c, 0)?;
            let gens = b.gens.clone().ok_or_else(|| c.err(0, "'gens' must come before relation rows"))?;
            let close = s.rfind(']').ok_or_else(|| c.err(0, "unclosed relation row"))?;
            let inner = &s[1..close];
            let twist = match parse_bidegrees(&c, &s[close + 1..], close + 1)?.as_slice() {
                [] => None,
                [t] => Some(*t),
                _ => return Err(c.err(close + 1, "at most one row twist")),
            };
            let pieces = split_commas(inner);
            if pieces.len() != gens.len() {
                return Err(c.err(0, format!("row has {} entries for {} generators", pieces.len(), gens.len())));
            }
            let mut entries = Vec::new();
            let mut row_deg: Option<Bidegree> = twist;
            for (k, (off, piece)) in pieces.into_iter().enumerate() {
                let at = 1 + off;
                let p = poly_at(&c, &ring, piece, at)?;
                bihomogeneous(&c, &p, at)?;
                if let Some(d) = p.bidegree() {
                    let t = d + gens[k];
                    match row_deg {
                        None => row_deg = Some(t),
                        Some(r) if r != t => {
                            return Err(c.err(at, format!("entry of bidegree {} under generator twist {} gives row twist {}, expected {}", fmt_bideg(d), fmt_bideg(gens[k]), fmt_bideg(t), fmt_bideg(r))));
                        }
                        _ => {}
                    }
                }
                entries.push(p);
            }
            b.rels.push(RelationRow { entries, twist });
            continue;
        }
        let (kw, rest) = match s.find(char::is_whitespace) {
            Some(i) => (&s[..i], &s[i..]),
            None => (s, ""),
        };
        let rest_off = kw.len() + (rest.len() - rest.trim_start().len());
        let rest = rest.trim();
        let in_rels_before = b.in_rels;
        b.in_rels = false;
        match kw {
            "field" => {
                if b.field.is_some() {
                    return Err(c.err(0, "duplicate 'field'"));
                }
                b.field = Some(parse_field(&c, rest, rest_off)?);
            }
            "order" => {
                if b.ring.is_some() {
                    return Err(c.err(0, "'order' after polynomials"));
                }
                b.order = Some(match rest {
                    "degrevlex" | "grevlex" => MonomialOrder::DegRevLex,
                    "lex" => MonomialOrder::Lex,
                    "block" => MonomialOrder::Block,
                    _ => return Err(c.err(rest_off, format!("unknown order {rest:?}"))),
                });
            }
            "basevars" | "fibervars" => {
                if b.ring.is_some() {
                    return Err(c.err(0, format!("'{kw}' after polynomials")));
                }
                let slot = if kw == "basevars" { &mut b.base_vars } else { &mut b.fiber_vars };
                if slot.is_some() {
                    return Err(c.err(0, format!("duplicate '{kw}'")));
                }
                let mut vars = Vec::new();
                let mut off = rest_off;
                for w in rest.split_whitespace() {
                    let at = off + s[off..].find(w).unwrap_or(0);
                    if !is_name(w) {
                        return Err(c.err(at, format!("bad variable name {w:?}")));
                    }
                    if seen_names.iter().any(|n| n == w) {
                        return Err(c.err(at, format!("variable {w} declared twice")));
                    }
                    seen_names.push(w.to_string());
                    vars.push(w.to_string());
                    off = at + w.len();
                }
                *slot = Some(vars);
            }
            "baserels" => {
                let ring = b.ring(&c, 0)?;
                for (off, piece) in split_commas(rest) {
                    let at = rest_off + off;
                    let p = poly_at(&c, &ring, piece, at)?;
                    if p.terms().iter().any(|(m, _)| m.exps()[ring.nbase()..].iter().any(|&e| e > 0)) {
                        return Err(c.err(at, "base relation involves fiber variables"));
                    }
                    bihomogeneous(&c, &p, at)?;
                    b.base_rels.push(p);
                }
                RingContext::new(ring.clone(), b.base_rels.clone()).map_err(|e| c.err(rest_off, e.to_string()))?;
            }
            "gens" => {
                if b.gens.is_some() {
                    return Err(c.err(0, "duplicate 'gens'"));
                }
                b.gens = Some(parse_bidegrees(&c, rest, rest_off)?);
            }
            "rels" => {
                if !rest.is_empty() {
                    return Err(c.err(rest_off, "relation rows go on their own lines"));
                }
                if in_rels_before || !b.rels.is_empty() {
                    return Err(c.err(0, "duplicate 'rels'"));
                }
                b.in_rels = true;
            }
            "ideal" => {
                let (name, gens) = rest.split_once('=').ok_or_else(|| c.err(rest_off, "expected 'ideal NAME = gens'"))?;
                let name = name.trim();
                if !is_name(name) {
                    return Err(c.err(rest_off, format!("bad ideal name {name:?}")));
                }
                if b.ideals.iter().any(|i| i.name == name) {
                    return Err(c.err(rest_off, format!("ideal {name} defined twice")));
                }
                let ring = b.ring(&c, 0)?;
                let goff = rest_off + rest.find('=').expect("split") + 1;
                let mut ps = Vec::new();
                for (off, piece) in split_commas(gens) {
                    let p = poly_at(&c, &ring, piece, goff + off)?;
                    bihomogeneous(&c, &p, goff + off)?;
                    ps.push(p);
                }
                b.ideals.push(NamedIdeal { name: name.to_string(), gens: ps });
            }
            _ => return Err(c.err(0, format!("unknown directive {kw:?}"))),
        }
    }
    let end = Cursor { line: text.lines().count().max(1), text: "", start: 0 };
    let ring = b.ring(&end, 0)?;
    let gens = b.gens.ok_or_else(|| end.err(0, "missing 'gens'"))?;
    Ok(ModuleFile {
        field: ring.field(),
        order: ring.order(),
        base_vars: b.base_vars.unwrap_or_default(),
        fiber_vars: b.fiber_vars.unwrap_or_default(),
        base_rels: b.base_rels,
        gens,
        rels: b.rels,
        ideals: b.ideals,
        ring,
    })
}
