//! Finitely presented graded modules over `P = k[y, x]` with the base relations adjoined.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::budget::Budget;
use crate::error::{AlgebraError, Result};
use crate::free::{FreeModule, ModuleOrderKind, Term, Vector};
use crate::groebner::{groebner_basis, groebner_basis_with, GbOptions, GroebnerBasis};
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::ring::{Bidegree, RingContext};

/// `coker(F_1 -> F_0)` over `P`, where the relation columns are the explicit relations
/// together with `J * e_j` for every generator.
#[derive(Clone, Debug)]
pub struct Module {
    ctx: Arc<RingContext>,
    free: FreeModule,
    relations: Vec<Vector>,
    gb: OnceLock<GroebnerBasis>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Module) -> bool {
        self.ctx == other.ctx && self.free == other.free && self.relations == other.relations
    }
}

impl Module {
    pub fn new(ctx: &Arc<RingContext>, twists: Vec<Bidegree>, relations: Vec<Vector>) -> Result<Module> {
        let free = FreeModule::new(ctx.ring(), twists);
        for r in &relations {
            if r.max_comp().is_some_and(|c| c >= free.rank()) {
                return Err(AlgebraError::InvalidInput("relation has too many entries".into()));
            }
        }
        let relations = relations
            .into_iter()
            .filter(|r| !r.is_zero())
            .map(|r| free.resort(r))
            .collect();
        Ok(Module { ctx: ctx.clone(), free, relations, gb: OnceLock::new() })
    }

    /// Relations given as columns of polynomials, one per generator.
    pub fn from_columns(ctx: &Arc<RingContext>, twists: Vec<Bidegree>, columns: &[Vec<Poly>]) -> Result<Module> {
        let free = FreeModule::new(ctx.ring(), twists.clone());
        let mut rels = Vec::new();
        for c in columns {
            if c.len() != free.rank() {
                return Err(AlgebraError::InvalidInput(format!(
                    "relation has {} entries, expected {}",
                    c.len(),
                    free.rank()
                )));
            }
            rels.push(free.from_polys(c));
        }
        Module::new(ctx, twists, rels)
    }

    pub fn free(ctx: &Arc<RingContext>, twists: Vec<Bidegree>) -> Module {
        Module::new(ctx, twists, Vec::new()).expect("no relations")
    }

    /// `P / (gens)` viewed as a module, generator in bidegree zero.
    pub fn cyclic(ctx: &Arc<RingContext>, gens: &[Poly]) -> Module {
        let free = FreeModule::new(ctx.ring(), vec![Bidegree::ZERO]);
        let rels = gens.iter().map(|g| free.from_poly_at(0, g)).collect();
        Module::new(ctx, vec![Bidegree::ZERO], rels).expect("rank one")
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn ambient(&self) -> &FreeModule {
        &self.free
    }

    pub fn rank(&self) -> usize {
        self.free.rank()
    }

    pub fn twists(&self) -> &[Bidegree] {
        self.free.twists()
    }

    pub fn relations(&self) -> &[Vector] {
        &self.relations
    }

    /// `J * e_j` for every generator.
    pub fn base_relation_vectors(&self) -> Vec<Vector> {
        let mut out = Vec::new();
        for j in 0..self.rank() {
            for p in self.ctx.base_relations() {
                out.push(self.free.from_poly_at(j, p));
            }
        }
        out
    }

    /// Explicit relations followed by the base relations on each generator.
    pub fn all_relations(&self) -> Vec<Vector> {
        let mut out = self.relations.clone();
        out.extend(self.base_relation_vectors());
        out
    }

    pub fn relation_gb(&self, budget: &Budget) -> Result<&GroebnerBasis> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let gb = groebner_basis(&self.free, &self.all_relations(), budget)?;
        let _ = self.gb.set(gb);
        Ok(self.gb.get().expect("just set"))
    }

    pub fn is_bigraded(&self) -> bool {
        self.relations.iter().all(|r| self.free.is_bihomogeneous(r))
    }

    pub fn check_bigraded(&self) -> Result<()> {
        match self.relations.iter().find(|r| !self.free.is_bihomogeneous(r)) {
            None => Ok(()),
            Some(r) => Err(AlgebraError::NotBihomogeneous(format!("relation {}", self.free.display(r)))),
        }
    }

    pub fn is_zero(&self, budget: &Budget) -> Result<bool> {
        Ok(self.relation_gb(budget)?.is_everything())
    }

    pub fn with_relations(&self, extra: impl IntoIterator<Item = Vector>) -> Module {
        let mut rels = self.relations.clone();
        rels.extend(extra.into_iter().map(|v| self.free.resort(v)).filter(|v| !v.is_zero()));
        Module { ctx: self.ctx.clone(), free: self.free.clone(), relations: rels, gb: OnceLock::new() }
    }

    /// `M / I M` for an ideal of `P`.
    pub fn mod_ideal(&self, ideal: &[Poly]) -> Module {
        let mut extra = Vec::new();
        for f in ideal {
            for j in 0..self.rank() {
                extra.push(self.free.from_poly_at(j, f));
            }
        }
        self.with_relations(extra)
    }

    /// `M(shift)`: generator degrees lowered by `shift`.
    pub fn shifted(&self, shift: Bidegree) -> Module {
        let twists = self.twists().iter().map(|&t| t - shift).collect();
        Module::new(&self.ctx, twists, self.relations.clone()).expect("same shape")
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        let free = self.free.direct_sum(&other.free);
        let mut rels = self.relations.clone();
        rels.extend(other.relations.iter().map(|r| free.resort(r.shifted(self.rank()))));
        Module { ctx: self.ctx.clone(), free, relations: rels, gb: OnceLock::new() }
    }

    /// Eliminates generators that some relation expresses through the others with a unit
    /// coefficient. Returns the new module and the images of the old generators in it.
    pub fn pruned_with_map(&self) -> (Module, Vec<Vector>) {
        let f = &self.free;
        let mut rels: Vec<Vector> = self.relations.clone();
        let mut images: Vec<Vector> = (0..self.rank()).map(|j| f.unit(j)).collect();
        let mut alive = vec![true; self.rank()];
        loop {
            // A unit entry: the whole coordinate is a nonzero constant.
            let pick = rels.iter().enumerate().find_map(|(ri, r)| {
                r.terms()
                    .iter()
                    .filter(|t| t.mon.is_one() && r.terms().iter().filter(|u| u.comp == t.comp).count() == 1)
                    .max_by_key(|t| t.comp)
                    .map(|t| (ri, t.comp, t.coeff.clone()))
            });
            let Some((ri, j, lambda)) = pick else { break };
            let col = rels.swap_remove(ri);
            let col = col.scale(&lambda.inv());
            // e_j = e_j - col in the quotient
            let subst = |v: &Vector| -> Vector {
                let cj = f.component(v, j);
                if cj.is_zero() {
                    return v.clone();
                }
                f.sub(v, &f.mul_poly(&cj, &col))
            };
            rels = rels.iter().map(subst).filter(|v| !v.is_zero()).collect();
            images = images.iter().map(subst).collect();
            alive[j] = false;
        }
        let mut newidx = vec![None; self.rank()];
        let mut twists = Vec::new();
        for (j, &a) in alive.iter().enumerate() {
            if a {
                newidx[j] = Some(twists.len());
                twists.push(self.free.twist(j));
            }
        }
        let nf = FreeModule::new(self.ctx.ring(), twists.clone());
        let map = |c: usize| newidx[c];
        let rels: Vec<Vector> = rels.iter().map(|r| nf.reindex(r, map)).collect();
        let images = images.iter().map(|v| nf.reindex(v, map)).collect();
        (Module::new(&self.ctx, twists, rels).expect("valid"), images)
    }

    pub fn pruned(&self) -> Module {
        self.pruned_with_map().0
    }

    /// Pruned presentation with a minimal set of explicit relations (graded case).
    pub fn minimized(&self, budget: &Budget) -> Result<Module> {
        let p = self.pruned();
        if !p.is_bigraded() {
            return Ok(p);
        }
        let fixed = p.base_relation_vectors();
        let rels = minimal_generators_with_fixed(&p.free, &fixed, &p.relations, budget)?;
        Module::new(&p.ctx, p.twists().to_vec(), rels)
    }

    /// Normal form of an element of the ambient free module modulo the relations.
    pub fn reduce(&self, v: &Vector, budget: &Budget) -> Result<Vector> {
        Ok(self.relation_gb(budget)?.reduce(v))
    }

    pub fn display(&self) -> String {
        let tw: Vec<String> = self.twists().iter().map(|t| t.to_string()).collect();
        let rels: Vec<String> = self.relations.iter().map(|r| self.free.display(r)).collect();
        format!("gens {} rels {}", tw.join(" "), rels.join("; "))
    }
}

/// `(gens + rels) / rels` inside a free module.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub free: FreeModule,
    pub gens: Vec<Vector>,
    pub rels: Vec<Vector>,
}

impl Subquotient {
    /// Submodule of `M` generated by the given elements of its ambient free module.
    pub fn of_module(m: &Module, gens: Vec<Vector>) -> Subquotient {
        Subquotient { free: m.free.clone(), gens, rels: m.all_relations() }
    }

    pub fn is_zero(&self, budget: &Budget) -> Result<bool> {
        if self.gens.iter().all(|g| g.is_zero()) {
            return Ok(true);
        }
        let gb = groebner_basis(&self.free, &self.rels, budget)?;
        Ok(self.gens.iter().all(|g| gb.contains(g)))
    }

    /// Presentation with one generator per element of `gens`, then pruned.
    pub fn presentation(&self, ctx: &Arc<RingContext>, budget: &Budget) -> Result<Module> {
        let gens: Vec<Vector> = self.gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        let twists: Vec<Bidegree> = gens.iter().map(|g| lead_bidegree(&self.free, g)).collect();
        let mut all = gens.clone();
        all.extend(self.rels.iter().cloned());
        let mut src_twists = twists.clone();
        src_twists.extend(self.rels.iter().map(|r| lead_bidegree(&self.free, r)));
        let src = FreeModule::new(self.free.ring(), src_twists);
        let syz = syzygies_in(&self.free, &all, &src, budget)?;
        let s = gens.len();
        let target = FreeModule::new(self.free.ring(), twists.clone());
        let rels: Vec<Vector> = syz
            .iter()
            .map(|v| target.reindex(v, |c| (c < s).then_some(c)))
            .filter(|v| !v.is_zero())
            .collect();
        // The base relations act on every generator; drop the ones they already give.
        let m = Module::new(ctx, twists, rels)?;
        m.minimized(budget)
    }
}

/// Bidegree of the leading term; the bidegree of a bihomogeneous vector.
pub fn lead_bidegree(f: &FreeModule, v: &Vector) -> Bidegree {
    match v.lead() {
        Some(t) => f.term_bidegree(t.comp, &t.mon),
        None => Bidegree::ZERO,
    }
}

/// Generators of the syzygies of `gens` in a free module whose `e_j` maps to `gens[j]`.
pub fn syzygies_in(fm: &FreeModule, gens: &[Vector], source: &FreeModule, budget: &Budget) -> Result<Vec<Vector>> {
    let r = fm.rank();
    let base = fm.with_order(ModuleOrderKind::Top, None);
    let aug = base.direct_sum(source).with_order(ModuleOrderKind::Top, Some(r));
    let vs: Vec<Vector> = gens
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let mut terms: Vec<Term> = g.terms().to_vec();
            terms.push(Term { comp: r + j, mon: fm.ring().one_monomial(), coeff: fm.ring().field().one() });
            aug.vector(terms)
        })
        .collect();
    let gb = groebner_basis(&aug, &vs, budget)?;
    Ok(gb
        .elems()
        .iter()
        .filter(|v| v.lead().is_some_and(|t| t.comp >= r))
        .map(|v| source.reindex(v, |c| c.checked_sub(r)))
        .collect())
}

/// Syzygies with source twists taken from the generators' bidegrees.
pub fn syzygies(fm: &FreeModule, gens: &[Vector], budget: &Budget) -> Result<(FreeModule, Vec<Vector>)> {
    let source = FreeModule::new(fm.ring(), gens.iter().map(|g| lead_bidegree(fm, g)).collect());
    let syz = syzygies_in(fm, gens, &source, budget)?;
    Ok((source, syz))
}

/// Elements `v` of the free module `source` (with `e_j -> images[j]` in `target`) whose image
/// lies in the span of `sub`.
pub fn preimage(
    source: &FreeModule,
    images: &[Vector],
    target: &FreeModule,
    sub: &[Vector],
    budget: &Budget,
) -> Result<Vec<Vector>> {
    let s = images.len();
    debug_assert_eq!(s, source.rank());
    let mut all: Vec<Vector> = images.to_vec();
    all.extend(sub.iter().cloned());
    let mut tw = source.twists().to_vec();
    tw.extend(sub.iter().map(|v| lead_bidegree(target, v)));
    let src = FreeModule::new(source.ring(), tw);
    let syz = syzygies_in(target, &all, &src, budget)?;
    Ok(syz
        .iter()
        .map(|v| source.reindex(v, |c| (c < s).then_some(c)))
        .filter(|v| !v.is_zero())
        .collect())
}

/// A minimal homogeneous generating set of the span of `gens` (bihomogeneous input).
pub fn minimal_generators(fm: &FreeModule, gens: &[Vector], budget: &Budget) -> Result<Vec<Vector>> {
    minimal_generators_with_fixed(fm, &[], gens, budget)
}

/// Elements of `gens` completing `fixed` to a minimal generating set of `fixed + gens`;
/// `fixed` elements are preferred within each degree.
pub fn minimal_generators_with_fixed(
    fm: &FreeModule,
    fixed: &[Vector],
    gens: &[Vector],
    budget: &Budget,
) -> Result<Vec<Vector>> {
    let mut items: Vec<(i64, bool, usize, &Vector)> = Vec::new();
    for (i, v) in fixed.iter().enumerate() {
        if !v.is_zero() {
            items.push((fm.top_degree(v).unwrap(), false, i, v));
        }
    }
    for (i, v) in gens.iter().enumerate() {
        if !v.is_zero() {
            items.push((fm.top_degree(v).unwrap(), true, i, v));
        }
    }
    if items.iter().any(|(_, _, _, v)| !fm.is_bihomogeneous(v)) {
        return Err(AlgebraError::NotBihomogeneous("minimal generators need graded input".into()));
    }
    items.sort_by_key(|&(d, g, i, _)| (d, g, i));
    let mut kept: Vec<Vector> = Vec::new();
    let mut out = Vec::new();
    let mut idx = 0;
    while idx < items.len() {
        let d = items[idx].0;
        let end = idx + items[idx..].iter().take_while(|it| it.0 == d).count();
        let gb = if kept.is_empty() {
            None
        } else {
            Some(groebner_basis_with(fm, &kept, GbOptions { degree_bound: Some(d) }, budget)?)
        };
        let mut lin = LinearSpan::default();
        for &(_, is_gen, _, v) in &items[idx..end] {
            let r = match &gb {
                Some(gb) => gb.reduce(v),
                None => v.clone(),
            };
            if lin.insert(fm, r) {
                kept.push(v.clone());
                if is_gen {
                    out.push(v.clone());
                }
            }
        }
        idx = end;
    }
    Ok(out)
}

/// Span of homogeneous vectors of a single degree, echelonized on term positions.
#[derive(Default)]
struct LinearSpan {
    rows: Vec<Vector>,
    by_lead: HashMap<(usize, Monomial), usize>,
}

impl LinearSpan {
    fn insert(&mut self, fm: &FreeModule, v: Vector) -> bool {
        let mut v = v;
        let mut kept: Vec<Term> = Vec::new();
        loop {
            let Some(t) = v.lead().cloned() else { break };
            match self.by_lead.get(&(t.comp, t.mon.clone())) {
                Some(&r) => {
                    let one = fm.ring().one_monomial();
                    v = fm.sub_mul(&v, &t.coeff, &one, &self.rows[r]);
                }
                None => {
                    kept.push(t);
                    v = crate::free::Vector::from_sorted_terms(v.terms()[1..].to_vec());
                }
            }
        }
        if kept.is_empty() {
            return false;
        }
        let row = crate::free::Vector::from_sorted_terms(kept).monic();
        let l = row.lead().unwrap();
        self.by_lead.insert((l.comp, l.mon.clone()), self.rows.len());
        self.rows.push(row);
        true
    }
}

/// Elements `v` of the ambient module of `m` with `g v ∈ sub + rels(m)` for every `g` in `gens`.
pub fn colon_submodule(m: &Module, sub: &[Vector], gens: &[Poly], budget: &Budget) -> Result<Vec<Vector>> {
    let r = m.rank();
    let f = m.ambient();
    if gens.is_empty() {
        return Ok((0..r).map(|j| f.unit(j)).collect());
    }
    let k = gens.len();
    let big = FreeModule::new(f.ring(), (0..k).flat_map(|_| f.twists().iter().copied()).collect());
    let images: Vec<Vector> = (0..r)
        .map(|s| {
            let mut acc = big.zero();
            for (b, g) in gens.iter().enumerate() {
                acc = big.add(&acc, &big.mul_poly(g, &big.unit(b * r + s)));
            }
            acc
        })
        .collect();
    let mut target = m.all_relations();
    target.extend(sub.iter().cloned());
    let mut rels = Vec::with_capacity(k * target.len());
    for b in 0..k {
        for t in &target {
            rels.push(big.resort(t.shifted(b * r)));
        }
    }
    preimage(f, &images, &big, &rels, budget)
}

/// Generators of `(0 :_M a^∞)`, the elements of `M` killed by a power of the ideal `a`.
pub fn saturation(m: &Module, gens: &[Poly], budget: &Budget) -> Result<Vec<Vector>> {
    let mut current: Vec<Vector> = Vec::new();
    loop {
        budget.charge(1)?;
        let next = colon_submodule(m, &current, gens, budget)?;
        let mut span = m.all_relations();
        span.extend(current.iter().cloned());
        let gb = groebner_basis(m.ambient(), &span, budget)?;
        if next.iter().all(|v| gb.contains(v)) {
            return Ok(current);
        }
        current = next;
    }
}

/// Whether every element of `a` lies in `b + rels(m)`.
pub fn submodule_contains(m: &Module, b: &[Vector], a: &[Vector], budget: &Budget) -> Result<bool> {
    let mut span = m.all_relations();
    span.extend(b.iter().cloned());
    let gb = groebner_basis(m.ambient(), &span, budget)?;
    Ok(a.iter().all(|v| gb.contains(v)))
}
