//! Ideals of a polynomial ring and the module-theoretic operations built on syzygies.

use std::sync::Arc;

use crate::budget::Budget;
use crate::error::Result;
use crate::free::{FreeModule, Vector};
use crate::groebner::{groebner_basis, GroebnerBasis};
use crate::module::{preimage, Module};
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::ring::{Bidegree, PolyRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<Poly>,
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Poly>) -> Ideal {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { ring: ring.clone(), gens }
    }

    /// The prime generated by the listed variables.
    pub fn vars(ring: &Arc<PolyRing>, vars: &[usize]) -> Ideal {
        Ideal::new(ring, vars.iter().map(|&i| Poly::var(ring, i)).collect())
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    fn free(&self) -> FreeModule {
        FreeModule::new(&self.ring, vec![Bidegree::ZERO])
    }

    fn vectors(&self) -> Vec<Vector> {
        let f = self.free();
        self.gens.iter().map(|g| f.from_poly_at(0, g)).collect()
    }

    pub fn gb(&self, budget: &Budget) -> Result<GroebnerBasis> {
        groebner_basis(&self.free(), &self.vectors(), budget)
    }

    pub fn contains(&self, f: &Poly, budget: &Budget) -> Result<bool> {
        let fm = self.free();
        Ok(self.gb(budget)?.contains(&fm.from_poly_at(0, f)))
    }

    pub fn contains_ideal(&self, other: &Ideal, budget: &Budget) -> Result<bool> {
        let gb = self.gb(budget)?;
        let fm = self.free();
        Ok(other.gens.iter().all(|g| gb.contains(&fm.from_poly_at(0, g))))
    }

    pub fn equals(&self, other: &Ideal, budget: &Budget) -> Result<bool> {
        Ok(self.contains_ideal(other, budget)? && other.contains_ideal(self, budget)?)
    }

    pub fn is_unit(&self, budget: &Budget) -> Result<bool> {
        Ok(self.gb(budget)?.is_everything())
    }

    pub fn is_monomial(&self) -> bool {
        self.gens.iter().all(|g| g.is_monomial())
    }

    pub fn is_bihomogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_bihomogeneous())
    }

    /// Reduced generators of the GB, as polynomials.
    pub fn gb_polys(&self, budget: &Budget) -> Result<Vec<Poly>> {
        let gb = self.gb(budget)?;
        Ok(gb.elems().iter().map(|v| gb.module().component(v, 0)).collect())
    }

    /// Krull dimension of `P / I`; `None` for the unit ideal.
    pub fn dimension(&self, budget: &Budget) -> Result<Option<usize>> {
        let gb = self.gb(budget)?;
        if gb.is_everything() {
            return Ok(None);
        }
        let leads: Vec<u64> = gb.leads().map(|(_, m)| support_mask(m)).collect();
        Ok(Some(max_independent_set(self.ring.nvars(), &leads)))
    }

    /// Generators of `ann_P(coker)` for a module presented over this ring.
    pub fn annihilator_of(m: &Module, budget: &Budget) -> Result<Ideal> {
        annihilator_of_elements(m, &(0..m.rank()).map(|j| m.ambient().unit(j)).collect::<Vec<_>>(), budget)
    }

    /// `I : f`.
    pub fn colon(&self, f: &Poly, budget: &Budget) -> Result<Ideal> {
        let fm = self.free();
        let src = FreeModule::new(&self.ring, vec![Bidegree::ZERO]);
        let pre = preimage(&src, &[fm.from_poly_at(0, f)], &fm, &self.vectors(), budget)?;
        Ok(Ideal::new(&self.ring, pre.iter().map(|v| src.component(v, 0)).collect()))
    }

    pub fn intersect(&self, other: &Ideal, budget: &Budget) -> Result<Ideal> {
        let fm = self.free();
        let src = FreeModule::new(&self.ring, vec![Bidegree::ZERO; self.gens.len()]);
        let imgs = self.vectors();
        let pre = preimage(&src, &imgs, &fm, &other.vectors(), budget)?;
        let gens = pre
            .iter()
            .map(|v| {
                let cs = src.to_polys(v);
                let mut acc = Poly::zero(&self.ring);
                for (c, g) in cs.iter().zip(&self.gens) {
                    acc = acc.try_add(&c.try_mul(g).expect("same ring")).expect("same ring");
                }
                acc
            })
            .collect();
        Ok(Ideal::new(&self.ring, gens))
    }
}

/// `ann_P` of the submodule of `M` generated by `elems` (vectors in the ambient free module).
pub fn annihilator_of_elements(m: &Module, elems: &[Vector], budget: &Budget) -> Result<Ideal> {
    let ring = m.ctx().ring().clone();
    let elems: Vec<&Vector> = elems.iter().filter(|e| !e.is_zero()).collect();
    if elems.is_empty() {
        return Ok(Ideal::new(&ring, vec![Poly::one(&ring)]));
    }
    // f -> (f e_1, ..., f e_k) in M^k; the kernel is the annihilator.
    let r = m.rank();
    let k = elems.len();
    let big = FreeModule::new(&ring, (0..k).flat_map(|_| m.twists().iter().copied()).collect());
    let mut image = big.zero();
    for (b, e) in elems.iter().enumerate() {
        image = big.add(&image, &big.resort(e.shifted(b * r)));
    }
    let mut rels = Vec::new();
    for b in 0..k {
        for rel in m.all_relations() {
            rels.push(big.resort(rel.shifted(b * r)));
        }
    }
    let src = FreeModule::new(&ring, vec![crate::module::lead_bidegree(&big, &image)]);
    let pre = preimage(&src, &[image], &big, &rels, budget)?;
    Ok(Ideal::new(&ring, pre.iter().map(|v| src.component(v, 0)).collect()))
}

pub fn support_mask(m: &Monomial) -> u64 {
    m.support().fold(0u64, |acc, i| acc | (1 << i))
}

/// Largest set of variables containing no lead support; the dimension of `P / I`.
pub fn max_independent_set(nvars: usize, lead_masks: &[u64]) -> usize {
    let mut best = 0;
    for set in 0u64..(1u64 << nvars) {
        let size = set.count_ones() as usize;
        if size > best && lead_masks.iter().all(|&l| l & !set != 0) {
            best = size;
        }
    }
    best
}
