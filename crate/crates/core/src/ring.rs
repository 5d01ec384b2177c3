//! Polynomial rings `k[y_1..y_m, x_1..x_n]` and quotient base contexts.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Poly;
use crate::scalar::Field;

/// Fiber degree (in the `x` variables) and base degree (in the `y` variables).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub fiber: i32,
    pub base: i32,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { fiber: 0, base: 0 };

    pub fn new(fiber: i32, base: i32) -> Bidegree {
        Bidegree { fiber, base }
    }

    pub fn total(self) -> i64 {
        self.fiber as i64 + self.base as i64
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.fiber + o.fiber, self.base + o.base)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.fiber - o.fiber, self.base - o.base)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.fiber, -self.base)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.fiber, self.base)
    }
}

/// The ambient polynomial ring. Variables `0..nbase` are base variables, the rest fiber variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: Field,
    names: Vec<String>,
    nbase: usize,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(
        field: Field,
        base: &[&str],
        fiber: &[&str],
        order: MonomialOrder,
    ) -> Result<Arc<PolyRing>> {
        let names: Vec<String> = base.iter().chain(fiber).map(|s| s.to_string()).collect();
        Self::from_names(field, names, base.len(), order)
    }

    pub fn from_names(
        field: Field,
        names: Vec<String>,
        nbase: usize,
        order: MonomialOrder,
    ) -> Result<Arc<PolyRing>> {
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(AlgebraError::InvalidInput(format!("bad variable name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(AlgebraError::InvalidInput(format!("duplicate variable {n}")));
            }
        }
        if nbase > names.len() {
            return Err(AlgebraError::InvalidInput("base count exceeds variables".into()));
        }
        Ok(Arc::new(PolyRing { field, names, nbase, order }))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn nbase(&self) -> usize {
        self.nbase
    }

    pub fn nfiber(&self) -> usize {
        self.names.len() - self.nbase
    }

    pub fn base_range(&self) -> std::ops::Range<usize> {
        0..self.nbase
    }

    pub fn fiber_range(&self) -> std::ops::Range<usize> {
        self.nbase..self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        self.order.cmp(self.nbase, a, b)
    }

    pub fn bidegree(&self, m: &Monomial) -> Bidegree {
        Bidegree::new(
            m.degree_in(self.fiber_range()) as i32,
            m.degree_in(self.base_range()) as i32,
        )
    }

    pub fn one_monomial(&self) -> Monomial {
        Monomial::one(self.nvars())
    }

    /// The ring of base variables only, same field and order.
    pub fn base_ring(&self) -> Arc<PolyRing> {
        Arc::new(PolyRing {
            field: self.field,
            names: self.names[..self.nbase].to_vec(),
            nbase: self.nbase,
            order: self.order,
        })
    }

    /// Same variables with a different order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<PolyRing> {
        Arc::new(PolyRing { order, ..self.clone() })
    }

    /// Base ring with extra base variables appended (fiber variables dropped).
    pub fn base_with_extra(&self, extra: &[String]) -> Result<Arc<PolyRing>> {
        let mut names = self.names[..self.nbase].to_vec();
        names.extend(extra.iter().cloned());
        let n = names.len();
        Self::from_names(self.field, names, n, self.order)
    }

    pub fn write_monomial(&self, m: &Monomial, f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(&self.names[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_char('1')?;
        }
        Ok(())
    }
}

/// Ring `R = k[y]/J` together with its fiber extension `S = R[x]`.
///
/// `J` is stored as polynomials in the ambient ring that involve only base variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingContext {
    ring: Arc<PolyRing>,
    base_relations: Vec<Poly>,
}

impl RingContext {
    pub fn new(ring: Arc<PolyRing>, base_relations: Vec<Poly>) -> Result<Arc<RingContext>> {
        let mut rels = Vec::new();
        for p in base_relations {
            if **p.ring() != *ring {
                return Err(AlgebraError::RingMismatch);
            }
            if p.terms().iter().any(|(m, _)| m.degree_in(ring.fiber_range()) > 0) {
                return Err(AlgebraError::InvalidInput(
                    "base relation involves fiber variables".into(),
                ));
            }
            if p.bidegree().is_none() {
                return Err(AlgebraError::NotBihomogeneous(format!(
                    "base relation {p} must be homogeneous in the base variables"
                )));
            }
            if p.is_constant() && !p.is_zero() {
                return Err(AlgebraError::InvalidInput("base relations generate the unit ideal".into()));
            }
            if !p.is_zero() {
                rels.push(p);
            }
        }
        Ok(Arc::new(RingContext { ring, base_relations: rels }))
    }

    pub fn polynomial(ring: Arc<PolyRing>) -> Arc<RingContext> {
        Arc::new(RingContext { ring, base_relations: Vec::new() })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn base_relations(&self) -> &[Poly] {
        &self.base_relations
    }

    pub fn is_field_base(&self) -> bool {
        self.ring.nbase() == 0
    }

    pub fn is_polynomial_base(&self) -> bool {
        self.base_relations.is_empty()
    }

    pub fn nbase(&self) -> usize {
        self.ring.nbase()
    }

    pub fn nfiber(&self) -> usize {
        self.ring.nfiber()
    }

    /// Context for `R` itself: base variables only, same relations.
    pub fn base_context(&self) -> Arc<RingContext> {
        let base = self.ring.base_ring();
        let rels = self
            .base_relations
            .iter()
            .map(|p| p.restrict_to_base(&base))
            .collect();
        Arc::new(RingContext { ring: base, base_relations: rels })
    }

    /// Whether every base relation is a monomial.
    pub fn has_monomial_relations(&self) -> bool {
        self.base_relations.iter().all(|p| p.terms().len() == 1)
    }
}
