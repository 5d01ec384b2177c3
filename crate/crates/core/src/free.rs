//! Graded free modules `P^r` with twists, and their elements.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::ring::{Bidegree, PolyRing};
use crate::scalar::Scalar;

/// How components interact with the monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleOrderKind {
    /// Term over position: monomial first (twisted degree first for degree orders).
    Top,
    /// Position over term.
    Pot,
}

/// Free module `⊕ P(-twist_j)`; generator `e_j` has bidegree `twists[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeModule {
    ring: Arc<PolyRing>,
    twists: Vec<Bidegree>,
    kind: ModuleOrderKind,
    /// Components `< split` dominate every component `>= split`.
    split: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub comp: usize,
    pub mon: Monomial,
    pub coeff: Scalar,
}

/// Element of a free module. Terms are strictly decreasing in the module order of the
/// [`FreeModule`] that produced them, with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vector {
    terms: Vec<Term>,
}

impl FreeModule {
    pub fn new(ring: &Arc<PolyRing>, twists: Vec<Bidegree>) -> FreeModule {
        FreeModule { ring: ring.clone(), twists, kind: ModuleOrderKind::Top, split: None }
    }

    pub fn with_order(&self, kind: ModuleOrderKind, split: Option<usize>) -> FreeModule {
        FreeModule { kind, split, ..self.clone() }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn twists(&self) -> &[Bidegree] {
        &self.twists
    }

    pub fn twist(&self, j: usize) -> Bidegree {
        self.twists[j]
    }

    pub fn kind(&self) -> ModuleOrderKind {
        self.kind
    }

    pub fn split(&self) -> Option<usize> {
        self.split
    }

    /// Direct sum `self ⊕ other`, keeping `self`'s order kind.
    pub fn direct_sum(&self, other: &FreeModule) -> FreeModule {
        let mut twists = self.twists.clone();
        twists.extend_from_slice(&other.twists);
        FreeModule { twists, ..self.clone() }
    }

    pub fn term_bidegree(&self, comp: usize, mon: &Monomial) -> Bidegree {
        self.ring.bidegree(mon) + self.twists[comp]
    }

    pub fn weighted_degree(&self, comp: usize, mon: &Monomial) -> i64 {
        mon.degree() + self.twists[comp].total()
    }

    /// Greater means leading.
    pub fn cmp(&self, ca: usize, ma: &Monomial, cb: usize, mb: &Monomial) -> Ordering {
        if let Some(s) = self.split {
            let (ba, bb) = (ca < s, cb < s);
            if ba != bb {
                return if ba { Ordering::Greater } else { Ordering::Less };
            }
        }
        match self.kind {
            ModuleOrderKind::Top => {
                let by_degree = if self.ring.order().is_degree_compatible() {
                    self.weighted_degree(ca, ma).cmp(&self.weighted_degree(cb, mb))
                } else {
                    Ordering::Equal
                };
                by_degree
                    .then_with(|| self.ring.cmp(ma, mb))
                    .then_with(|| cb.cmp(&ca))
            }
            ModuleOrderKind::Pot => cb.cmp(&ca).then_with(|| self.ring.cmp(ma, mb)),
        }
    }

    fn cmp_terms(&self, a: &Term, b: &Term) -> Ordering {
        self.cmp(a.comp, &a.mon, b.comp, &b.mon)
    }

    pub fn zero(&self) -> Vector {
        Vector::default()
    }

    pub fn unit(&self, j: usize) -> Vector {
        Vector {
            terms: vec![Term { comp: j, mon: self.ring.one_monomial(), coeff: self.ring.field().one() }],
        }
    }

    /// Vector with the given coordinate polynomials.
    pub fn from_polys(&self, polys: &[Poly]) -> Vector {
        debug_assert_eq!(polys.len(), self.rank());
        let mut terms = Vec::new();
        for (j, p) in polys.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(Term { comp: j, mon: m.clone(), coeff: c.clone() });
            }
        }
        self.vector(terms)
    }

    /// Single-component vector `p * e_j`.
    pub fn from_poly_at(&self, j: usize, p: &Poly) -> Vector {
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| Term { comp: j, mon: m.clone(), coeff: c.clone() })
            .collect();
        self.vector(terms)
    }

    /// Normalizes arbitrary terms: combines duplicates, drops zeros, sorts.
    pub fn vector(&self, terms: Vec<Term>) -> Vector {
        let mut acc: HashMap<(usize, Monomial), Scalar> = HashMap::with_capacity(terms.len());
        for t in terms {
            match acc.get_mut(&(t.comp, t.mon.clone())) {
                Some(s) => s.add_assign_ref(&t.coeff),
                None => {
                    acc.insert((t.comp, t.mon), t.coeff);
                }
            }
        }
        let mut out: Vec<Term> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((comp, mon), coeff)| Term { comp, mon, coeff })
            .collect();
        out.sort_by(|a, b| self.cmp_terms(b, a));
        Vector { terms: out }
    }

    /// Re-sorts a vector produced under a different order on the same components.
    pub fn resort(&self, v: Vector) -> Vector {
        let mut terms = v.terms;
        terms.sort_by(|a, b| self.cmp_terms(b, a));
        Vector { terms }
    }

    /// Keeps components in `map` (old index -> new index) and re-sorts in `self`.
    pub fn reindex(&self, v: &Vector, map: impl Fn(usize) -> Option<usize>) -> Vector {
        let terms = v
            .terms
            .iter()
            .filter_map(|t| map(t.comp).map(|c| Term { comp: c, mon: t.mon.clone(), coeff: t.coeff.clone() }))
            .collect();
        self.resort(Vector { terms })
    }

    pub fn add(&self, a: &Vector, b: &Vector) -> Vector {
        self.merge(a, b, None)
    }

    pub fn sub(&self, a: &Vector, b: &Vector) -> Vector {
        self.merge(a, b, Some((&self.ring.field().one(), &self.ring.one_monomial())))
    }

    /// `a - c * m * b`.
    pub fn sub_mul(&self, a: &Vector, c: &Scalar, m: &Monomial, b: &Vector) -> Vector {
        self.merge(a, b, Some((c, m)))
    }

    fn merge(&self, a: &Vector, b: &Vector, sub: Option<(&Scalar, &Monomial)>) -> Vector {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let scaled = |t: &Term| -> Term {
            match sub {
                None => t.clone(),
                Some((c, m)) => Term { comp: t.comp, mon: t.mon.mul(m), coeff: -&(&t.coeff * c) },
            }
        };
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            let bt = scaled(&b.terms[j]);
            match self.cmp_terms(&a.terms[i], &bt) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(bt);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a.terms[i].coeff + &bt.coeff;
                    if !c.is_zero() {
                        out.push(Term { coeff: c, ..bt });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a.terms[i..].iter().cloned());
        out.extend(b.terms[j..].iter().map(scaled));
        Vector { terms: out }
    }

    pub fn mul_poly(&self, p: &Poly, v: &Vector) -> Vector {
        if p.is_monomial() {
            let (m, c) = &p.terms()[0];
            return v.mul_term(c, m);
        }
        let mut terms = Vec::with_capacity(p.terms().len() * v.terms.len());
        for (m, c) in p.terms() {
            for t in &v.terms {
                terms.push(Term { comp: t.comp, mon: t.mon.mul(m), coeff: &t.coeff * c });
            }
        }
        self.vector(terms)
    }

    /// Common bidegree of all terms of `v`.
    pub fn bidegree(&self, v: &Vector) -> Option<Bidegree> {
        let t0 = v.terms.first()?;
        let d = self.term_bidegree(t0.comp, &t0.mon);
        v.terms
            .iter()
            .all(|t| self.term_bidegree(t.comp, &t.mon) == d)
            .then_some(d)
    }

    pub fn is_bihomogeneous(&self, v: &Vector) -> bool {
        v.is_zero() || self.bidegree(v).is_some()
    }

    /// Maximal twisted total degree of a term; the initial sugar of a generator.
    pub fn top_degree(&self, v: &Vector) -> Option<i64> {
        v.terms.iter().map(|t| self.weighted_degree(t.comp, &t.mon)).max()
    }

    pub fn component(&self, v: &Vector, j: usize) -> Poly {
        let terms: Vec<_> = v
            .terms
            .iter()
            .filter(|t| t.comp == j)
            .map(|t| (t.mon.clone(), t.coeff.clone()))
            .collect();
        Poly::from_terms(&self.ring, terms)
    }

    pub fn to_polys(&self, v: &Vector) -> Vec<Poly> {
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); self.rank()];
        for t in &v.terms {
            buckets[t.comp].push((t.mon.clone(), t.coeff.clone()));
        }
        buckets.into_iter().map(|b| Poly::from_terms(&self.ring, b)).collect()
    }

    pub fn display(&self, v: &Vector) -> String {
        let parts: Vec<String> = self.to_polys(v).iter().map(|p| p.to_string()).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl Vector {
    /// Caller guarantees the terms are already in module order.
    pub(crate) fn from_sorted_terms(terms: Vec<Term>) -> Vector {
        Vector { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `c * m * self`; every module order is multiplicative so the order is kept.
    pub fn mul_term(&self, c: &Scalar, m: &Monomial) -> Vector {
        if c.is_zero() {
            return Vector::default();
        }
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| Term { comp: t.comp, mon: t.mon.mul(m), coeff: &t.coeff * c })
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        if c.is_zero() {
            return Vector::default();
        }
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| Term { comp: t.comp, mon: t.mon.clone(), coeff: &t.coeff * c })
                .collect(),
        }
    }

    pub fn neg(&self) -> Vector {
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| Term { comp: t.comp, mon: t.mon.clone(), coeff: -&t.coeff })
                .collect(),
        }
    }

    pub fn monic(&self) -> Vector {
        match self.lead() {
            Some(t) if !t.coeff.is_one() => self.scale(&t.coeff.inv()),
            _ => self.clone(),
        }
    }

    /// Shifts component indices by `offset`; order kind must be compatible with the target.
    pub fn shifted(&self, offset: usize) -> Vector {
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| Term { comp: t.comp + offset, mon: t.mon.clone(), coeff: t.coeff.clone() })
                .collect(),
        }
    }

    pub fn max_comp(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.comp).max()
    }

    pub fn has_unit_entry(&self) -> bool {
        self.terms.iter().any(|t| t.mon.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::MonomialOrder;
    use crate::scalar::Field;

    #[test]
    fn top_uses_twists() {
        let r = PolyRing::new(Field::Rational, &[], &["x"], MonomialOrder::DegRevLex).unwrap();
        let f = FreeModule::new(&r, vec![Bidegree::new(0, 0), Bidegree::new(3, 0)]);
        let x2 = Monomial::from_exponents(&[2]);
        let one = Monomial::from_exponents(&[0]);
        // x^2 e_0 has degree 2, e_1 has degree 3
        assert_eq!(f.cmp(0, &x2, 1, &one), Ordering::Less);
        let pot = f.with_order(ModuleOrderKind::Pot, None);
        assert_eq!(pot.cmp(0, &x2, 1, &one), Ordering::Greater);
    }

    #[test]
    fn split_dominates() {
        let r = PolyRing::new(Field::Rational, &[], &["x"], MonomialOrder::DegRevLex).unwrap();
        let f = FreeModule::new(&r, vec![Bidegree::ZERO; 2]).with_order(ModuleOrderKind::Top, Some(1));
        let big = Monomial::from_exponents(&[9]);
        let one = Monomial::from_exponents(&[0]);
        assert_eq!(f.cmp(0, &one, 1, &big), Ordering::Greater);
    }

    #[test]
    fn arithmetic_roundtrip() {
        let r = PolyRing::new(Field::Rational, &["y"], &["x"], MonomialOrder::DegRevLex).unwrap();
        let f = FreeModule::new(&r, vec![Bidegree::ZERO; 2]);
        let p = Poly::parse(&r, "x^2 + y").unwrap();
        let q = Poly::parse(&r, "x*y - 1").unwrap();
        let v = f.from_polys(&[p.clone(), q.clone()]);
        let w = f.mul_poly(&q, &v);
        assert_eq!(f.component(&w, 0), p.try_mul(&q).unwrap());
        assert!(f.sub(&w, &w).is_zero());
    }
}
