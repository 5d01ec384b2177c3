//! Seeded generators of small bigraded modules.
//!
//! Every generator is a pure function of its seed, so a failing corpus member can be
//! reproduced from the index printed by the test that found it.

use std::sync::Arc;

use gstab_core::{Bidegree, Field, Module, Monomial, MonomialOrder, Poly, PolyRing, RingContext, Scalar};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ring(field: Field, nbase: usize, nfiber: usize) -> Arc<PolyRing> {
    let base: Vec<String> = (1..=nbase).map(|i| format!("y{i}")).collect();
    let fiber: Vec<String> = (1..=nfiber).map(|i| format!("x{i}")).collect();
    let b: Vec<&str> = base.iter().map(String::as_str).collect();
    let f: Vec<&str> = fiber.iter().map(String::as_str).collect();
    PolyRing::new(field, &b, &f, MonomialOrder::DegRevLex).expect("valid names")
}

/// All exponent vectors of length `n` summing to `d`.
pub fn compositions(n: usize, d: u16) -> Vec<Vec<u16>> {
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in compositions(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Monomials of bidegree `(fiber, base)`, base exponents first.
pub fn monomials_of(ring: &PolyRing, deg: Bidegree) -> Vec<Monomial> {
    if deg.fiber < 0 || deg.base < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for b in compositions(ring.nbase(), deg.base as u16) {
        for f in compositions(ring.nfiber(), deg.fiber as u16) {
            let exps: Vec<u16> = b.iter().chain(&f).copied().collect();
            out.push(Monomial::from_exponents(&exps));
        }
    }
    out
}

fn coefficient(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    loop {
        let c = field.from_i64(rng.gen_range(-3..=3));
        if !c.is_zero() {
            return c;
        }
    }
}

/// A bihomogeneous polynomial of bidegree `deg` with at most `max_terms` terms; zero when
/// no monomial has that bidegree.
pub fn random_poly(rng: &mut ChaCha8Rng, ring: &Arc<PolyRing>, deg: Bidegree, max_terms: usize) -> Poly {
    let mons = monomials_of(ring, deg);
    if mons.is_empty() {
        return Poly::zero(ring);
    }
    let k = rng.gen_range(1..=max_terms.min(mons.len()));
    let terms = (0..k).map(|_| (mons[rng.gen_range(0..mons.len())].clone(), coefficient(rng, ring.field()))).collect();
    Poly::from_terms(ring, terms)
}

/// Size limits for [`random_module`].
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub field: Field,
    pub nbase: usize,
    pub nfiber: usize,
    /// Bound on the total degree of relation entries.
    pub max_degree: i32,
    pub max_rank: usize,
    pub max_relations: usize,
    pub max_terms: usize,
}

impl Shape {
    pub fn small(nbase: usize, nfiber: usize) -> Shape {
        Shape { field: Field::Rational, nbase, nfiber, max_degree: 3, max_rank: 2, max_relations: 4, max_terms: 3 }
    }
}

/// A module `F / (relations)` with generator twists in `{0,1} x {0,1}` and bihomogeneous
/// relation columns whose entries have total degree at most `max_degree`.
pub fn random_module(rng: &mut ChaCha8Rng, shape: &Shape) -> Module {
    let ring = ring(shape.field, shape.nbase, shape.nfiber);
    let ctx = RingContext::polynomial(ring.clone());
    random_module_over(rng, &ctx, shape)
}

pub fn random_module_over(rng: &mut ChaCha8Rng, ctx: &Arc<RingContext>, shape: &Shape) -> Module {
    let ring = ctx.ring().clone();
    let rank = rng.gen_range(1..=shape.max_rank);
    let twists: Vec<Bidegree> = (0..rank)
        .map(|_| Bidegree::new(rng.gen_range(0..=1), if shape.nbase > 0 { rng.gen_range(0..=1) } else { 0 }))
        .collect();
    let nrels = rng.gen_range(0..=shape.max_relations);
    let mut columns = Vec::new();
    let top = twists.iter().fold(Bidegree::new(0, 0), |a, t| Bidegree::new(a.fiber.max(t.fiber), a.base.max(t.base)));
    for _ in 0..nrels {
        // A column of bidegree D has entry degrees D - twist_j.
        let mut col = Vec::new();
        for _ in 0..8 {
            let extra = rng.gen_range(1..=shape.max_degree);
            let base_part = if shape.nbase > 0 { rng.gen_range(0..=extra) } else { 0 };
            let d = top + Bidegree::new(extra - base_part, base_part);
            col = twists
                .iter()
                .map(|&t| {
                    let e = d - t;
                    if e.fiber + e.base > shape.max_degree || rng.gen_bool(0.25) {
                        Poly::zero(&ring)
                    } else {
                        random_poly(rng, &ring, e, shape.max_terms)
                    }
                })
                .collect();
            if col.iter().any(|p| !p.is_zero()) {
                break;
            }
        }
        if col.iter().any(|p| !p.is_zero()) {
            columns.push(col);
        }
    }
    Module::from_columns(ctx, twists, &columns).expect("bihomogeneous columns")
}

/// One summand `S/J (-twist)` of a monomial module, `J` given by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSummand {
    pub twist: Bidegree,
    pub gens: Vec<Vec<u16>>,
}

/// `⊕ S/J_c (-t_c)` with monomial `J_c`: multigraded, and every slice a direct sum of
/// monomial quotients of the base.
#[derive(Clone, Debug)]
pub struct MonomialModule {
    pub nbase: usize,
    pub nfiber: usize,
    pub summands: Vec<MonomialSummand>,
    pub module: Module,
}

fn random_exponents(rng: &mut ChaCha8Rng, nbase: usize, nfiber: usize, max_degree: u16) -> Vec<u16> {
    loop {
        let v: Vec<u16> = (0..nbase + nfiber).map(|_| rng.gen_range(0..=max_degree)).collect();
        let d: u16 = v.iter().sum();
        if d >= 1 && d <= max_degree {
            return v;
        }
    }
}

pub fn random_monomial_module(rng: &mut ChaCha8Rng, field: Field, nbase: usize, nfiber: usize, max_rank: usize) -> MonomialModule {
    let ring = ring(field, nbase, nfiber);
    let ctx = RingContext::polynomial(ring.clone());
    let rank = rng.gen_range(1..=max_rank);
    let mut summands = Vec::new();
    let mut twists = Vec::new();
    let mut columns = Vec::new();
    for c in 0..rank {
        let twist = Bidegree::new(rng.gen_range(0..=1), if nbase > 0 { rng.gen_range(0..=1) } else { 0 });
        let ngens = rng.gen_range(1..=3);
        let gens: Vec<Vec<u16>> = (0..ngens).map(|_| random_exponents(rng, nbase, nfiber, 3)).collect();
        for g in &gens {
            let mut col = vec![Poly::zero(&ring); rank];
            col[c] = Poly::term(&ring, Monomial::from_exponents(g), field.one());
            columns.push(col);
        }
        twists.push(twist);
        summands.push(MonomialSummand { twist, gens });
    }
    let module = Module::from_columns(&ctx, twists, &columns).expect("monomial columns");
    MonomialModule { nbase, nfiber, summands, module }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 6);
        assert_eq!(compositions(0, 0), vec![Vec::<u16>::new()]);
        assert!(compositions(0, 1).is_empty());
    }

    #[test]
    fn modules_are_bigraded_and_reproducible() {
        for seed in 0..20 {
            let a = random_module(&mut rng(seed), &Shape::small(1, 2));
            let b = random_module(&mut rng(seed), &Shape::small(1, 2));
            assert!(a.is_bigraded());
            assert_eq!(a.display(), b.display());
        }
    }

    #[test]
    fn monomial_modules_are_multigraded() {
        for seed in 0..20 {
            let m = random_monomial_module(&mut rng(seed), Field::Rational, 2, 2, 2);
            assert!(gstab_core::invariants::ass::is_multigraded(&m.module));
        }
    }
}
