//! Minimal bigraded free resolutions over the ambient ring `P`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{AlgebraError, Result};
use crate::free::{FreeModule, Vector};
use crate::module::{lead_bidegree, minimal_generators, syzygies_in, Module};
use crate::ring::{Bidegree, RingContext};

/// `0 <- F_0 <- F_1 <- ... <- F_L`; `maps[k]` holds the columns of `d_{k+1}` as vectors in `F_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeResolution {
    ctx: Arc<RingContext>,
    frees: Vec<FreeModule>,
    maps: Vec<Vec<Vector>>,
    complete: bool,
}

impl FreeResolution {
    /// Reassembles a resolution from its twists and differential columns, as stored elsewhere.
    /// Shapes, degrees, `d² = 0` and minimality are checked; exactness is not.
    pub fn from_parts(
        ctx: &Arc<RingContext>,
        twists: Vec<Vec<Bidegree>>,
        maps: Vec<Vec<Vector>>,
        complete: bool,
    ) -> Result<FreeResolution> {
        if twists.len() != maps.len() + 1 {
            return Err(AlgebraError::InvalidInput("one more free module than differentials expected".into()));
        }
        let frees: Vec<FreeModule> = twists.into_iter().map(|t| FreeModule::new(ctx.ring(), t)).collect();
        for (k, cols) in maps.iter().enumerate() {
            if cols.len() != frees[k + 1].rank() {
                return Err(AlgebraError::InvalidInput(format!("d_{} has {} columns for a rank {} source", k + 1, cols.len(), frees[k + 1].rank())));
            }
            for (c, v) in cols.iter().enumerate() {
                if v.terms().iter().any(|t| t.comp >= frees[k].rank()) {
                    return Err(AlgebraError::InvalidInput(format!("d_{} column {c} leaves the target", k + 1)));
                }
                if v.is_zero() || frees[k].bidegree(v) != Some(frees[k + 1].twists()[c]) {
                    return Err(AlgebraError::NotBihomogeneous(format!("d_{} column {c}", k + 1)));
                }
            }
        }
        let res = FreeResolution { ctx: ctx.clone(), frees, maps, complete };
        if !res.is_complex() || !res.is_minimal() {
            return Err(AlgebraError::InvalidInput("not a minimal complex".into()));
        }
        Ok(res)
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    /// Number of differentials computed.
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    /// Whether `F_{L+1} = 0`, so the resolution is finished.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// `F_k`, or `None` beyond the computed range. A complete resolution has `F_k = 0` there.
    pub fn free(&self, k: usize) -> Option<&FreeModule> {
        self.frees.get(k)
    }

    pub fn rank(&self, k: usize) -> usize {
        self.frees.get(k).map_or(0, |f| f.rank())
    }

    pub fn twists(&self, k: usize) -> &[Bidegree] {
        self.frees.get(k).map_or(&[], |f| f.twists())
    }

    /// Columns of `d_k: F_k -> F_{k-1}` for `k >= 1`.
    pub fn differential(&self, k: usize) -> &[Vector] {
        assert!(k >= 1);
        self.maps.get(k - 1).map_or(&[], |v| v.as_slice())
    }

    /// Whether `F_k` is known: computed, or zero because the resolution is complete.
    pub fn knows(&self, k: usize) -> bool {
        k < self.frees.len() || self.complete
    }

    /// Minimal means no differential has a nonzero constant entry.
    pub fn is_minimal(&self) -> bool {
        self.maps.iter().flatten().all(|v| !v.has_unit_entry())
    }

    /// Checks `d_k d_{k+1} = 0` for all computed `k`.
    pub fn is_complex(&self) -> bool {
        for k in 1..self.maps.len() {
            let tgt = &self.frees[k - 1];
            for col in &self.maps[k] {
                let mut acc = tgt.zero();
                for t in col.terms() {
                    let img = self.maps[k - 1][t.comp].mul_term(&t.coeff, &t.mon);
                    acc = tgt.add(&acc, &img);
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Graded Betti numbers `(i, bidegree) -> rank`. Requires a minimal resolution.
    pub fn betti_table(&self) -> Result<BettiTable> {
        if !self.is_minimal() {
            return Err(AlgebraError::InvalidInput("resolution is not minimal".into()));
        }
        let mut entries = BTreeMap::new();
        for (i, f) in self.frees.iter().enumerate() {
            for &t in f.twists() {
                *entries.entry((i, t)).or_insert(0) += 1;
            }
        }
        Ok(BettiTable { entries, complete: self.complete })
    }
}

/// Graded Betti numbers, keyed by homological index and generator bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, Bidegree), usize>,
    pub complete: bool,
}

impl BettiTable {
    /// Ranks keyed by homological index and fiber twist.
    pub fn by_fiber(&self) -> BTreeMap<(usize, i32), usize> {
        let mut out = BTreeMap::new();
        for (&(i, d), &r) in &self.entries {
            *out.entry((i, d.fiber)).or_insert(0) += r;
        }
        out
    }

    /// `max (fiber twist - i)` over nonzero entries.
    pub fn fiber_regularity(&self) -> Option<i64> {
        self.entries.keys().map(|&(i, d)| d.fiber as i64 - i as i64).max()
    }
}

/// Minimal free resolution of `M` over `P`, with at most `length_bound` differentials.
pub fn free_resolution(m: &Module, length_bound: Option<usize>, budget: &Budget) -> Result<FreeResolution> {
    m.check_bigraded()?;
    let ring = m.ctx().ring().clone();
    let bound = length_bound.unwrap_or(ring.nvars() + 1);
    let m = m.pruned();
    let f0 = FreeModule::new(&ring, m.twists().to_vec());
    let mut current = minimal_generators(&f0, &m.all_relations(), budget)?;
    let mut frees = vec![f0];
    let mut maps: Vec<Vec<Vector>> = Vec::new();
    while !current.is_empty() && maps.len() < bound {
        let prev = frees.last().unwrap().clone();
        let fk = FreeModule::new(&ring, current.iter().map(|c| lead_bidegree(&prev, c)).collect());
        let syz = syzygies_in(&prev, &current, &fk, budget)?;
        maps.push(current);
        current = minimal_generators(&fk, &syz, budget)?;
        frees.push(fk);
    }
    let complete = current.is_empty();
    Ok(FreeResolution { ctx: m.ctx().clone(), frees, maps, complete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::MonomialOrder;
    use crate::poly::Poly;
    use crate::ring::PolyRing;
    use crate::scalar::Field;

    fn ctx(fiber: &[&str]) -> Arc<RingContext> {
        RingContext::polynomial(PolyRing::new(Field::Rational, &[], fiber, MonomialOrder::DegRevLex).unwrap())
    }

    fn cyclic(c: &Arc<RingContext>, gens: &[&str]) -> Module {
        let g: Vec<Poly> = gens.iter().map(|s| Poly::parse(c.ring(), s).unwrap()).collect();
        Module::cyclic(c, &g)
    }

    #[test]
    fn koszul_resolution_of_residue_field() {
        let c = ctx(&["x1", "x2", "x3"]);
        let m = cyclic(&c, &["x1", "x2", "x3"]);
        let r = free_resolution(&m, None, &Budget::unlimited()).unwrap();
        assert!(r.is_complete() && r.is_minimal() && r.is_complex());
        assert_eq!((0..4).map(|k| r.rank(k)).collect::<Vec<_>>(), vec![1, 3, 3, 1]);
        assert_eq!(r.twists(3), &[Bidegree::new(3, 0)]);
    }

    #[test]
    fn twisted_cubic_betti() {
        let c = ctx(&["a", "b", "c", "d"]);
        let m = cyclic(&c, &["a*c - b^2", "b*d - c^2", "a*d - b*c"]);
        let r = free_resolution(&m, None, &Budget::unlimited()).unwrap();
        let b = r.betti_table().unwrap().by_fiber();
        assert_eq!(b.get(&(1, 2)), Some(&3));
        assert_eq!(b.get(&(2, 3)), Some(&2));
        assert_eq!(r.length(), 2);
        assert_eq!(r.betti_table().unwrap().fiber_regularity(), Some(1));
    }

    #[test]
    fn length_bound_truncates() {
        let c = ctx(&["x1", "x2", "x3"]);
        let m = cyclic(&c, &["x1", "x2", "x3"]);
        let r = free_resolution(&m, Some(1), &Budget::unlimited()).unwrap();
        assert!(!r.is_complete());
        assert_eq!(r.length(), 1);
    }

    #[test]
    fn non_minimal_rejected() {
        let c = ctx(&["x"]);
        let f0 = FreeModule::new(c.ring(), vec![Bidegree::ZERO]);
        let f1 = FreeModule::new(c.ring(), vec![Bidegree::ZERO]);
        let r = FreeResolution {
            ctx: c.clone(),
            frees: vec![f0.clone(), f1],
            maps: vec![vec![f0.unit(0)]],
            complete: true,
        };
        assert!(r.betti_table().is_err());
    }
}
