//! Associated primes through the membership test `ann(0 :_N p) = p`, exhaustive over monomial
//! primes for multigraded modules, and the submodules `H^0_{[i]}(N)` built from them.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{AlgebraError, Result};
use crate::free::{FreeModule, Term, Vector};
use crate::ideal::{annihilator_of_elements, Ideal};
use crate::module::{colon_submodule, saturation, Module, Subquotient};
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::ring::{Bidegree, PolyRing, RingContext};

/// A prime of the ambient polynomial ring, containing the base relations when it is used for
/// a quotient base.
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    ring: Arc<PolyRing>,
    gens: Vec<Poly>,
    /// Variable set for monomial primes.
    vars: Option<u64>,
    dim: usize,
}

impl PrimeIdeal {
    /// The prime generated by the variables in `mask`; always prime.
    pub fn monomial(ring: &Arc<PolyRing>, mask: u64) -> PrimeIdeal {
        let gens = (0..ring.nvars()).filter(|i| mask >> i & 1 == 1).map(|i| Poly::var(ring, i)).collect();
        PrimeIdeal { ring: ring.clone(), gens, vars: Some(mask), dim: ring.nvars() - mask.count_ones() as usize }
    }

    /// A user-supplied prime. Only the cheap checks run: the ideal is proper, and no variable
    /// outside it is a zero divisor modulo it.
    pub fn asserted(ideal: &Ideal, budget: &Budget) -> Result<PrimeIdeal> {
        let ring = ideal.ring().clone();
        let gb = ideal.gb_polys(budget)?;
        let reduced = Ideal::new(&ring, gb);
        let dim = reduced
            .dimension(budget)?
            .ok_or_else(|| AlgebraError::InvalidInput("asserted prime is the unit ideal".into()))?;
        if reduced.gens().iter().all(|g| g.is_monomial() && g.terms()[0].0.exps().iter().all(|&e| e <= 1))
            && reduced.gens().iter().all(|g| g.terms()[0].0.degree() == 1)
        {
            let mask = reduced.gens().iter().fold(0u64, |m, g| m | crate::ideal::support_mask(&g.terms()[0].0));
            return Ok(PrimeIdeal::monomial(&ring, mask));
        }
        for v in 0..ring.nvars() {
            let x = Poly::var(&ring, v);
            if reduced.contains(&x, budget)? {
                continue;
            }
            if !reduced.equals(&reduced.colon(&x, budget)?, budget)? {
                return Err(AlgebraError::InvalidInput(format!(
                    "asserted prime fails: {} is a zero divisor modulo it",
                    ring.names()[v]
                )));
            }
        }
        Ok(PrimeIdeal { ring, gens: reduced.gens().to_vec(), vars: None, dim })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(&self.ring, self.gens.clone())
    }

    pub fn is_monomial(&self) -> bool {
        self.vars.is_some()
    }

    /// Primality is certified only for monomial primes.
    pub fn is_asserted(&self) -> bool {
        self.vars.is_none()
    }

    pub fn var_mask(&self) -> Option<u64> {
        self.vars
    }

    /// `dim P/p`, equal to `dim R/p` since `p` contains the base relations.
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn key(&self) -> (u8, u64, String) {
        match self.vars {
            Some(m) => (0, m, String::new()),
            None => (1, 0, self.to_string()),
        }
    }
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &PrimeIdeal) -> bool {
        self.key() == other.key()
    }
}

impl Eq for PrimeIdeal {}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &PrimeIdeal) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, other: &PrimeIdeal) -> Ordering {
        let (a, b) = (self.key(), other.key());
        let idx = |m: u64| (0..64).filter(|i| m >> i & 1 == 1).collect::<Vec<u32>>();
        // Monomial primes by size, then by variable indices.
        (a.0, a.1.count_ones(), idx(a.1), a.2).cmp(&(b.0, b.1.count_ones(), idx(b.1), b.2))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return f.write_str("(0)");
        }
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A `Z^N`-grading on the generators making every relation (base relations included)
/// homogeneous: `deg(u e_j) = u + offset_j`. `None` if no such grading exists.
pub fn multigrading(m: &Module) -> Option<Vec<Vec<i64>>> {
    let nv = m.ctx().ring().nvars();
    let rels = m.all_relations();
    let exps = |mon: &Monomial| -> Vec<i64> { mon.exps().iter().map(|&e| e as i64).collect() };
    let nb = m.ctx().ring().nbase();
    // Seeds carry the bidegree of the generator, so propagated offsets keep the fiber and base
    // totals of every bihomogeneous generator.
    let seed = |c: usize| -> Vec<i64> {
        let mut o = vec![0; nv];
        let t = m.twists()[c];
        if nb > 0 {
            o[0] = t.base as i64;
        }
        if nv > nb {
            o[nb] = t.fiber as i64;
        }
        o
    };
    let mut offset: Vec<Option<Vec<i64>>> = vec![None; m.rank()];
    loop {
        let mut progressed = false;
        let mut stalled = None;
        for (ri, r) in rels.iter().enumerate() {
            let known = r.terms().iter().find_map(|t| {
                offset[t.comp].as_ref().map(|o| exps(&t.mon).iter().zip(o).map(|(a, b)| a + b).collect::<Vec<i64>>())
            });
            match known {
                Some(total) => {
                    for t in r.terms() {
                        if offset[t.comp].is_none() {
                            offset[t.comp] = Some(total.iter().zip(exps(&t.mon)).map(|(a, b)| a - b).collect());
                            progressed = true;
                        }
                    }
                }
                None => {
                    if stalled.is_none() && !r.is_zero() {
                        stalled = Some(ri);
                    }
                }
            }
        }
        if progressed {
            continue;
        }
        match stalled {
            Some(ri) => {
                let c = rels[ri].terms()[0].comp;
                offset[c] = Some(seed(c));
            }
            None => break,
        }
    }
    let offset: Vec<Vec<i64>> = offset.into_iter().enumerate().map(|(c, o)| o.unwrap_or_else(|| seed(c))).collect();
    for r in &rels {
        let mut degs = r.terms().iter().map(|t| exps(&t.mon).iter().zip(&offset[t.comp]).map(|(a, b)| a + b).collect::<Vec<_>>());
        if let Some(first) = degs.next() {
            if degs.any(|d| d != first) {
                return None;
            }
        }
    }
    Some(offset)
}

pub fn is_multigraded(m: &Module) -> bool {
    multigrading(m).is_some()
}

/// Whether `p ∈ Ass(N)`: `p` is the annihilator of `(0 :_N p)`, a nonzero submodule whose
/// annihilator is prime exactly when `p` is associated.
pub fn is_associated(p: &PrimeIdeal, n: &Module, budget: &Budget) -> Result<bool> {
    let killed = colon_submodule(n, &[], p.gens(), budget)?;
    let ann = annihilator_of_elements(n, &killed, budget)?;
    ann.equals(&p.ideal(), budget)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssResult {
    pub primes: BTreeSet<PrimeIdeal>,
    /// False in candidate mode: primes outside the candidate list were not examined.
    pub complete: bool,
}

/// Whether the minimal generators of a monomial ideal all meet the variable set `mask`.
fn covers(mask: u64, monomial_gens: &[u64]) -> bool {
    monomial_gens.iter().all(|&g| g & mask != 0)
}

/// `Ass(N)` in full, for multigraded `N`: every associated prime is then a monomial prime
/// containing `ann(N)`, and each such candidate goes through the membership test.
pub fn ass_primes(n: &Module, budget: &Budget) -> Result<AssResult> {
    if !is_multigraded(n) {
        return Err(AlgebraError::OutOfScope(
            "exact associated primes need a multigraded module; supply candidate primes instead".into(),
        ));
    }
    let ring = n.ctx().ring().clone();
    let ann = Ideal::annihilator_of(n, budget)?;
    let gens = ann.gb_polys(budget)?;
    let mut primes = BTreeSet::new();
    if gens.iter().any(|g| g.is_constant()) {
        return Ok(AssResult { primes, complete: true });
    }
    let masks: Vec<u64> = gens.iter().map(|g| crate::ideal::support_mask(&g.terms()[0].0)).collect();
    debug_assert!(gens.iter().all(|g| g.is_monomial()), "multigraded modules have monomial annihilators");
    for mask in 0..(1u64 << ring.nvars()) {
        if !covers(mask, &masks) {
            continue;
        }
        let p = PrimeIdeal::monomial(&ring, mask);
        if is_associated(&p, n, budget)? {
            primes.insert(p);
        }
    }
    Ok(AssResult { primes, complete: true })
}

/// The candidates that pass the membership test; completeness is not claimed.
pub fn ass_candidates(n: &Module, candidates: &[PrimeIdeal], budget: &Budget) -> Result<AssResult> {
    let mut primes = BTreeSet::new();
    for p in candidates {
        if **p.ring() != **n.ctx().ring() {
            return Err(AlgebraError::RingMismatch);
        }
        if is_associated(p, n, budget)? {
            primes.insert(p.clone());
        }
    }
    Ok(AssResult { primes, complete: false })
}

/// Minimal primes of a monomial ideal given by the supports of its generators: the minimal
/// variable sets meeting every support. Empty for the unit ideal.
pub fn monomial_minimal_primes(supports: &[u64]) -> Vec<u64> {
    if supports.contains(&0) {
        return Vec::new();
    }
    let universe = supports.iter().fold(0u64, |a, &s| a | s);
    let bits: Vec<u32> = (0..64).filter(|i| universe >> i & 1 == 1).collect();
    let mut found: Vec<u64> = Vec::new();
    // Subsets of the universe in order of size, so every kept cover is minimal.
    let mut subsets: Vec<u64> = (0..(1u64 << bits.len()))
        .map(|s| bits.iter().enumerate().filter(|(k, _)| s >> k & 1 == 1).fold(0u64, |a, (_, &b)| a | 1 << b))
        .collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    for s in subsets {
        if covers(s, supports) && !found.iter().any(|&f| f & s == f) {
            found.push(s);
        }
    }
    found
}

/// Supports of the reduced generators when `ann(N)` is a monomial ideal.
pub fn monomial_annihilator(n: &Module, budget: &Budget) -> Result<Option<Vec<u64>>> {
    let gens = Ideal::annihilator_of(n, budget)?.gb_polys(budget)?;
    if !gens.iter().all(|g| g.is_monomial()) {
        return Ok(None);
    }
    Ok(Some(gens.iter().map(|g| crate::ideal::support_mask(&g.terms()[0].0)).collect()))
}

/// `Γ_b(N) = (0 :_N b^∞)` for the ideal `b` given by generators.
pub fn torsion_submodule(n: &Module, b: &Ideal, budget: &Budget) -> Result<Subquotient> {
    let gens = saturation(n, b.gens(), budget)?;
    Ok(Subquotient::of_module(n, gens))
}

/// `H^0_{[i]}(N)`, the largest submodule whose support has dimension at most `i`. It is
/// `Γ_b(N)` for `b` the intersection of the associated primes `p` with `dim R/p ≤ i`.
pub fn h0_support_dim(n: &Module, i: usize, budget: &Budget) -> Result<Subquotient> {
    let ring = n.ctx().ring();
    let base_bits = (1u64 << ring.nbase()) - 1;
    let ass = ass_primes(n, budget)?;
    // Supports are measured over the base ring, through the contractions `P ∩ R`.
    let mut low: Vec<u64> = ass
        .primes
        .iter()
        .filter_map(|p| p.var_mask())
        .map(|m| m & base_bits)
        .filter(|q| ring.nbase() - (q.count_ones() as usize) <= i)
        .collect();
    low.sort_unstable();
    low.dedup();
    if low.is_empty() {
        return Ok(Subquotient::of_module(n, Vec::new()));
    }
    let mut b = PrimeIdeal::monomial(ring, low[0]).ideal();
    for &q in &low[1..] {
        b = b.intersect(&PrimeIdeal::monomial(ring, q).ideal(), budget)?;
    }
    torsion_submodule(n, &b, budget)
}

/// `N` with the variables outside a monomial prime inverted, presented over the polynomial
/// ring in the variables of `p`.
#[derive(Clone, Debug)]
pub struct Localized {
    pub module: Module,
    /// Original indices of the kept variables.
    pub kept: Vec<usize>,
}

/// Sets the variables outside `p` to 1. For multigraded `N` this presents `N_p` up to a
/// faithfully flat extension, and the kept variables generate the maximal graded ideal.
pub fn localize_monomial(n: &Module, p: &PrimeIdeal) -> Result<Localized> {
    let mask = p
        .var_mask()
        .ok_or_else(|| AlgebraError::OutOfScope("localization only at monomial primes".into()))?;
    let offsets = multigrading(n)
        .ok_or_else(|| AlgebraError::OutOfScope("localization needs a multigraded module".into()))?;
    let ring = n.ctx().ring();
    let kept: Vec<usize> = (0..ring.nvars()).filter(|&i| mask >> i & 1 == 1).collect();
    let base: Vec<&str> = kept.iter().filter(|&&i| i < ring.nbase()).map(|&i| ring.names()[i].as_str()).collect();
    let fiber: Vec<&str> = kept.iter().filter(|&&i| i >= ring.nbase()).map(|&i| ring.names()[i].as_str()).collect();
    let small = PolyRing::new(ring.field(), &base, &fiber, ring.order())?;
    let restrict = |m: &Monomial| Monomial::from_exponents(&kept.iter().map(|&i| m.exps()[i]).collect::<Vec<_>>());
    let mut unit = false;
    let mut rels = Vec::new();
    for j in n.ctx().base_relations() {
        let q = Poly::from_terms(&small, j.terms().iter().map(|(m, c)| (restrict(m), c.clone())).collect());
        unit |= q.is_constant() && !q.is_zero();
        rels.push(q);
    }
    let twist = |o: &[i64]| -> Bidegree {
        let sum = |pred: &dyn Fn(usize) -> bool| kept.iter().filter(|&&i| pred(i)).map(|&i| o[i]).sum::<i64>() as i32;
        Bidegree::new(sum(&|i| i >= ring.nbase()), sum(&|i| i < ring.nbase()))
    };
    if unit {
        let ctx = RingContext::polynomial(small);
        return Ok(Localized { module: Module::free(&ctx, Vec::new()), kept });
    }
    let ctx = RingContext::new(small.clone(), rels)?;
    let twists: Vec<Bidegree> = offsets.iter().map(|o| twist(o)).collect();
    let free = FreeModule::new(&small, twists.clone());
    let relations = n
        .relations()
        .iter()
        .map(|r| {
            let terms = r
                .terms()
                .iter()
                .map(|t| Term { comp: t.comp, mon: restrict(&t.mon), coeff: t.coeff.clone() })
                .collect();
            free.vector(terms)
        })
        .collect();
    Ok(Localized { module: Module::new(&ctx, twists, relations)?, kept })
}

/// Vectors of `n` expressed over the ring of a localization.
pub fn localize_vector(loc: &Localized, v: &Vector) -> Vector {
    let free = loc.module.ambient();
    let terms = v
        .terms()
        .iter()
        .map(|t| Term {
            comp: t.comp,
            mon: Monomial::from_exponents(&loc.kept.iter().map(|&i| t.mon.exps()[i]).collect::<Vec<_>>()),
            coeff: t.coeff.clone(),
        })
        .collect();
    free.vector(terms)
}

/// Minimal primes of `Supp(N)` when `ann(N)` is monomial.
pub fn minimal_support_primes(n: &Module, budget: &Budget) -> Result<Option<Vec<PrimeIdeal>>> {
    let ring = n.ctx().ring().clone();
    Ok(monomial_annihilator(n, budget)?
        .map(|s| monomial_minimal_primes(&s).into_iter().map(|m| PrimeIdeal::monomial(&ring, m)).collect()))
}

/// Groups primes by dimension, largest first; used in reports.
pub fn by_dimension(primes: &BTreeSet<PrimeIdeal>) -> Vec<(usize, Vec<String>)> {
    let mut map: HashMap<usize, Vec<String>> = HashMap::new();
    for p in primes {
        map.entry(p.dim()).or_default().push(p.to_string());
    }
    let mut out: Vec<_> = map.into_iter().collect();
    out.sort_by(|a, b| b.0.cmp(&a.0));
    out
}
