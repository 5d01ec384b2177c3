//! Sparse polynomials over a [`PolyRing`].

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{AlgebraError, Result};
use crate::monomial::Monomial;
use crate::ring::{Bidegree, PolyRing};
use crate::scalar::Scalar;

/// Terms are sorted strictly decreasing in the ring order with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, Scalar)>,
}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Poly {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Scalar) -> Poly {
        Self::term(ring, ring.one_monomial(), c)
    }

    pub fn one(ring: &Arc<PolyRing>) -> Poly {
        Self::constant(ring, ring.field().one())
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Poly {
        Self::term(ring, Monomial::var(ring.nvars(), i), ring.field().one())
    }

    pub fn term(ring: &Arc<PolyRing>, m: Monomial, c: Scalar) -> Poly {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Poly { ring: ring.clone(), terms }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: Vec<(Monomial, Scalar)>) -> Poly {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(s) => s.add_assign_ref(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        Poly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn lead(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    /// Common bidegree of all terms; `None` for zero or mixed polynomials.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let first = self.ring.bidegree(&self.terms.first()?.0);
        self.terms
            .iter()
            .all(|(m, _)| self.ring.bidegree(m) == first)
            .then_some(first)
    }

    pub fn is_bihomogeneous(&self) -> bool {
        self.is_zero() || self.bidegree().is_some()
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self.combine(other, true))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self.product(other))
    }

    fn combine(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let neg = |c: &Scalar| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match self.ring.cmp(&a[i].0, &b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b[j].0.clone(), neg(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), neg(c))));
        Poly { ring: self.ring.clone(), terms: out }
    }

    fn product(&self, other: &Poly) -> Poly {
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(c, m);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(c, m);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                terms.push((m1.mul(m2), c1 * c2));
            }
        }
        Poly::from_terms(&self.ring, terms)
    }

    /// `c * m * self`; order is preserved so no re-sort is needed.
    pub fn mul_term(&self, c: &Scalar, m: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        self.mul_term(c, &self.ring.one_monomial())
    }

    pub fn neg(&self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..e {
            acc = acc.product(self);
        }
        acc
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv()),
            _ => self.clone(),
        }
    }

    /// Ring map sending variable `i` to `images[i]` in `target`.
    pub fn substitute(&self, target: &Arc<PolyRing>, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.ring.nvars());
        let mut cache: HashMap<(usize, u16), Poly> = HashMap::new();
        let mut acc: Vec<(Monomial, Scalar)> = Vec::new();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache.entry((i, e)).or_insert_with(|| images[i].pow(e as u32)).clone();
                t = t.product(&p);
            }
            acc.extend(t.terms);
        }
        Poly::from_terms(target, acc)
    }

    /// Re-expresses a polynomial that only involves base variables in the base ring.
    pub fn restrict_to_base(&self, base: &Arc<PolyRing>) -> Poly {
        let nb = base.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!(m.exps()[nb..].iter().all(|&e| e == 0));
                (m.slice(0..nb), c.clone())
            })
            .collect();
        Poly::from_terms(base, terms)
    }

    /// Renames variables: variable `i` of `self` becomes variable `map[i]` of `target`.
    pub fn map_vars(&self, target: &Arc<PolyRing>, map: &[usize]) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = Monomial::one(target.nvars());
                for (i, &e) in m.exps().iter().enumerate() {
                    if e > 0 {
                        out.set(map[i], out.exps()[map[i]] + e);
                    }
                }
                (out, c.clone())
            })
            .collect();
        Poly::from_terms(target, terms)
    }

    /// Parses the textual syntax: `+ - * ^`, parentheses, integer and `a/b` coefficients.
    pub fn parse(ring: &Arc<PolyRing>, src: &str) -> std::result::Result<Poly, PolyParseError> {
        let mut p = Parser { ring, src: src.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                self.ring.write_monomial(m, f)?;
            }
        }
        Ok(())
    }
}

/// Parse failure with a byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for PolyParseError {}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    src: &'a [u8],
    pos: usize,
}

const MAX_EXPONENT: u32 = 1000;

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyParseError {
        PolyParseError { offset: self.pos, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> std::result::Result<Poly, PolyParseError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.combine(&self.term()?, false);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.combine(&self.term()?, true);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> std::result::Result<Poly, PolyParseError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = acc.product(&self.unary()?);
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(PolyParseError {
                            offset: at,
                            message: "division only by nonzero constants".into(),
                        });
                    }
                    acc = acc.scale(&d.terms[0].1.inv());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> std::result::Result<Poly, PolyParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> std::result::Result<Poly, PolyParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or(PolyParseError { offset: start, message: "exponent out of range".into() })?;
            if !base.is_monomial() && e > 64 {
                return Err(PolyParseError { offset: start, message: "exponent too large".into() });
            }
            if base.is_monomial() {
                let (m, c) = &base.terms[0];
                if m.exps().iter().any(|&x| x as u32 * e > u16::MAX as u32) {
                    return Err(PolyParseError { offset: start, message: "exponent overflow".into() });
                }
                let mut cc = self.ring.field().one();
                for _ in 0..e {
                    cc = &cc * c;
                }
                return Ok(Poly::term(self.ring, m.pow(e as u16), cc));
            }
            if base.terms.iter().any(|(m, _)| m.degree() as u64 * e as u64 > u16::MAX as u64) {
                return Err(PolyParseError { offset: start, message: "exponent overflow".into() });
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> std::result::Result<BigInt, PolyParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> std::result::Result<Poly, PolyParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(Poly::constant(self.ring, self.ring.field().from_bigint(&v)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.ring.var_index(name) {
                    Some(i) => Ok(Poly::var(self.ring, i)),
                    None => Err(PolyParseError {
                        offset: start,
                        message: format!("unknown variable {name}"),
                    }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::MonomialOrder;
    use crate::scalar::Field;
    use proptest::prelude::*;

    fn ring() -> Arc<PolyRing> {
        PolyRing::new(Field::Rational, &["y1", "y2"], &["x1", "x2"], MonomialOrder::DegRevLex).unwrap()
    }

    #[test]
    fn parse_print_roundtrip() {
        let r = ring();
        let p = Poly::parse(&r, "(x1 + y1)^2 - 3/2*x2*y2 + 7").unwrap();
        let q = Poly::parse(&r, &p.to_string()).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.to_string(), "y1^2 + 2*y1*x1 + x1^2 - 3/2*y2*x2 + 7");
    }

    #[test]
    fn parse_errors_have_offsets() {
        let r = ring();
        let e = Poly::parse(&r, "x1 + z").unwrap_err();
        assert_eq!(e.offset, 5);
        assert!(Poly::parse(&r, "x1 / x2").is_err());
        assert!(Poly::parse(&r, "(x1").is_err());
    }

    #[test]
    fn bidegree_detects_mixed() {
        let r = ring();
        assert_eq!(
            Poly::parse(&r, "x1^2*y1 + x1*x2*y2").unwrap().bidegree(),
            Some(Bidegree::new(2, 1))
        );
        assert!(Poly::parse(&r, "x1 + y1").unwrap().bidegree().is_none());
    }

    #[test]
    fn mismatch_detected() {
        let r = ring();
        let s = PolyRing::new(Field::Prime(5), &["y1", "y2"], &["x1", "x2"], MonomialOrder::DegRevLex).unwrap();
        assert_eq!(Poly::one(&r).try_add(&Poly::one(&s)), Err(AlgebraError::RingMismatch));
    }

    fn small_poly() -> impl Strategy<Value = Vec<(Vec<u16>, i64)>> {
        proptest::collection::vec((proptest::collection::vec(0u16..3, 4), -3i64..4), 0..5)
    }

    fn build(r: &Arc<PolyRing>, t: Vec<(Vec<u16>, i64)>) -> Poly {
        Poly::from_terms(
            r,
            t.into_iter()
                .map(|(e, c)| (Monomial::from_exponents(&e), r.field().from_i64(c)))
                .collect(),
        )
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            let r = ring();
            let (a, b, c) = (build(&r, a), build(&r, b), build(&r, c));
            let lhs = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
            let rhs = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
            prop_assert!(a.try_sub(&a).unwrap().is_zero());
        }

        #[test]
        fn print_parse(a in small_poly()) {
            let r = ring();
            let p = build(&r, a);
            prop_assert_eq!(Poly::parse(&r, &p.to_string()).unwrap(), p);
        }
    }
}
