//! Fiber-degree slices `M_μ` as modules over the base ring, and truncations `M_{≥μ}`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::budget::Budget;
use crate::error::Result;
use crate::free::{FreeModule, Term, Vector};
use crate::module::{Module, Subquotient};
use crate::monomial::Monomial;
use crate::ring::{Bidegree, RingContext};
use crate::support::monomials_of_degree;

/// `M_μ` presented over `R`; generator `k` stands for `x^u e_j` with `(j, u) = basis[k]`.
#[derive(Clone, Debug)]
pub struct SliceModule {
    pub mu: i64,
    pub module: Module,
    pub basis: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
    parent_ctx: Arc<RingContext>,
}

impl SliceModule {
    /// Image in the slice of an element of the parent's ambient module, keeping only its terms
    /// of fiber degree `μ`.
    pub fn embed(&self, v: &Vector) -> Vector {
        let ring = self.parent_ctx.ring();
        let fr = ring.fiber_range();
        let br = ring.base_range();
        let mut terms = Vec::new();
        for t in v.terms() {
            let u = t.mon.slice(fr.clone());
            if let Some(&k) = self.index.get(&(t.comp, u)) {
                terms.push(Term { comp: k, mon: t.mon.slice(br.clone()), coeff: t.coeff.clone() });
            }
        }
        self.module.ambient().vector(terms)
    }

    pub fn is_zero(&self, budget: &Budget) -> Result<bool> {
        self.module.is_zero(budget)
    }
}

/// `M_μ` with generators `x^u e_j`, `deg u + f_j = μ`, and relations the `x`-monomial multiples
/// of the parent relations landing in fiber degree `μ`.
pub fn graded_slice(m: &Module, mu: i64) -> Result<SliceModule> {
    m.check_bigraded()?;
    let ctx = m.ctx();
    let ring = ctx.ring();
    let n = ring.nfiber();
    let fr = ring.fiber_range();
    let br = ring.base_range();
    let base = ctx.base_context();
    let mut basis = Vec::new();
    let mut twists = Vec::new();
    for (j, t) in m.twists().iter().enumerate() {
        for u in monomials_of_degree(n, mu - t.fiber as i64) {
            basis.push((j, u));
            twists.push(Bidegree::new(0, t.base));
        }
    }
    let index: HashMap<(usize, Monomial), usize> =
        basis.iter().enumerate().map(|(k, b)| (b.clone(), k)).collect();
    let free = FreeModule::new(base.ring(), twists.clone());
    let mut rels = Vec::new();
    for rel in m.relations() {
        let Some(deg) = m.ambient().bidegree(rel) else { continue };
        for v in monomials_of_degree(n, mu - deg.fiber as i64) {
            let mut terms = Vec::new();
            for t in rel.terms() {
                let u = t.mon.slice(fr.clone()).mul(&v);
                let k = index[&(t.comp, u)];
                terms.push(Term { comp: k, mon: t.mon.slice(br.clone()), coeff: t.coeff.clone() });
            }
            rels.push(free.vector(terms));
        }
    }
    let module = Module::new(&base, twists, rels)?;
    Ok(SliceModule { mu, module, basis, index, parent_ctx: ctx.clone() })
}

/// `M_{≥μ}`, the submodule generated by all slices of degree at least `μ`.
pub fn truncate(m: &Module, mu: i64, budget: &Budget) -> Result<Module> {
    let min = m.twists().iter().map(|t| t.fiber as i64).min();
    if min.is_none_or(|lo| mu <= lo) {
        return Ok(m.clone());
    }
    let ring = m.ctx().ring();
    let n = ring.nfiber();
    let nb = ring.nbase();
    let one = ring.field().one();
    let mut gens = Vec::new();
    for (j, t) in m.twists().iter().enumerate() {
        for u in monomials_of_degree(n, (mu - t.fiber as i64).max(0)) {
            let mon = Monomial::one(nb).concat(&u);
            gens.push(m.ambient().vector(vec![Term { comp: j, mon, coeff: one.clone() }]));
        }
    }
    Subquotient::of_module(m, gens).presentation(m.ctx(), budget)
}
