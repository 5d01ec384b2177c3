//! Koszul complexes, dualized resolution slices, and the power-Koszul colimit oracle.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{AlgebraError, Result};
use crate::free::{FreeModule, Term, Vector};
use crate::groebner::groebner_basis;
use crate::linalg::{self, SparseRow};
use crate::module::{lead_bidegree, preimage, Module, Subquotient};
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::resolution::FreeResolution;
use crate::ring::{Bidegree, PolyRing, RingContext};
use crate::support::monomials_of_degree;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KoszulKind {
    /// `K^p = ⊕_{|J|=p} M(deg a_J)`, differential raising `p`.
    Cohomological,
    /// `K_p = ⊕_{|J|=p} M(-deg a_J)`, differential lowering `p`.
    Homological,
}

/// Bidegree of the leading term; the bidegree of a bihomogeneous polynomial.
pub fn lead_poly_bidegree(p: &Poly) -> Bidegree {
    p.lead().map_or(Bidegree::ZERO, |(m, _)| p.ring().bidegree(m))
}

/// `K(a; M)` with one copy of `M` per subset `J` of the sequence.
///
/// Generator `(J, s)` of term `p` sits at index `b * rank(M) + s`, where `b` is the position of
/// `J` among the `p`-subsets in increasing bitmask order. The sign of `e_J -> e_{J ∪ j}` and of
/// `e_J -> e_{J \ j}` is `(-1)^{#{k in J : k < j}}`.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    seq: Vec<Poly>,
    module: Module,
    kind: KoszulKind,
    subsets: Vec<Vec<u64>>,
    index: Vec<HashMap<u64, usize>>,
    terms: Vec<Module>,
    /// `maps[p]`: images of the ambient generators of term `p` under the outgoing differential.
    maps: Vec<Vec<Vector>>,
}

fn subsets_by_size(r: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new(); r + 1];
    for mask in 0u64..(1u64 << r) {
        out[mask.count_ones() as usize].push(mask);
    }
    out
}

fn sign_of(mask: u64, j: usize) -> bool {
    (mask & ((1u64 << j) - 1)).count_ones() % 2 == 1
}

impl KoszulComplex {
    pub fn new(seq: &[Poly], m: &Module, kind: KoszulKind) -> Result<KoszulComplex> {
        let ring = m.ctx().ring().clone();
        if seq.iter().any(|a| **a.ring() != *ring) {
            return Err(AlgebraError::RingMismatch);
        }
        if seq.len() > 20 {
            return Err(AlgebraError::InvalidInput("Koszul sequence longer than 20".into()));
        }
        let r = seq.len();
        let rank = m.rank();
        let subsets = subsets_by_size(r);
        let index: Vec<HashMap<u64, usize>> =
            subsets.iter().map(|s| s.iter().enumerate().map(|(i, &mask)| (mask, i)).collect()).collect();
        let degs: Vec<Bidegree> = seq.iter().map(lead_poly_bidegree).collect();
        let deg_of = |mask: u64| -> Bidegree {
            (0..r).filter(|j| mask >> j & 1 == 1).fold(Bidegree::ZERO, |acc, j| acc + degs[j])
        };
        let mut terms = Vec::with_capacity(r + 1);
        for sets in &subsets {
            let mut twists = Vec::with_capacity(sets.len() * rank);
            for &mask in sets {
                let d = deg_of(mask);
                for &t in m.twists() {
                    twists.push(match kind {
                        KoszulKind::Cohomological => t - d,
                        KoszulKind::Homological => t + d,
                    });
                }
            }
            let free = FreeModule::new(&ring, twists.clone());
            let mut rels = Vec::new();
            for b in 0..sets.len() {
                for rel in m.relations() {
                    rels.push(free.resort(rel.shifted(b * rank)));
                }
            }
            terms.push(Module::new(m.ctx(), twists, rels)?);
        }
        let mut maps = Vec::with_capacity(r + 1);
        for p in 0..=r {
            let target = match kind {
                KoszulKind::Cohomological if p < r => Some(p + 1),
                KoszulKind::Homological if p > 0 => Some(p - 1),
                _ => None,
            };
            let Some(q) = target else {
                maps.push(Vec::new());
                continue;
            };
            let tf = terms[q].ambient().clone();
            let mut cols = Vec::with_capacity(subsets[p].len() * rank);
            for &mask in &subsets[p] {
                for s in 0..rank {
                    let mut out = Vec::new();
                    for (j, a) in seq.iter().enumerate() {
                        let inside = mask >> j & 1 == 1;
                        let other = match kind {
                            KoszulKind::Cohomological if !inside => mask | 1 << j,
                            KoszulKind::Homological if inside => mask & !(1 << j),
                            _ => continue,
                        };
                        let comp = index[q][&other] * rank + s;
                        let neg = sign_of(mask, j);
                        for (mon, c) in a.terms() {
                            let coeff = if neg { -c } else { c.clone() };
                            out.push(Term { comp, mon: mon.clone(), coeff });
                        }
                    }
                    cols.push(tf.vector(out));
                }
            }
            maps.push(cols);
        }
        Ok(KoszulComplex { seq: seq.to_vec(), module: m.clone(), kind, subsets, index, terms, maps })
    }

    pub fn sequence(&self) -> &[Poly] {
        &self.seq
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn kind(&self) -> KoszulKind {
        self.kind
    }

    /// Length of the sequence; terms are indexed `0..=len`.
    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn term(&self, p: usize) -> &Module {
        &self.terms[p]
    }

    /// Subsets of size `p`, as bitmasks, in block order.
    pub fn subsets(&self, p: usize) -> &[u64] {
        &self.subsets[p]
    }

    pub fn block_of(&self, p: usize, mask: u64) -> Option<usize> {
        self.index.get(p).and_then(|m| m.get(&mask).copied())
    }

    /// Images of the generators of term `p` under the differential leaving it.
    pub fn differential(&self, p: usize) -> &[Vector] {
        &self.maps[p]
    }

    fn next(&self, p: usize) -> Option<usize> {
        match self.kind {
            KoszulKind::Cohomological => (p < self.len()).then_some(p + 1),
            KoszulKind::Homological => p.checked_sub(1),
        }
    }

    fn prev(&self, p: usize) -> Option<usize> {
        match self.kind {
            KoszulKind::Cohomological => p.checked_sub(1),
            KoszulKind::Homological => (p < self.len()).then_some(p + 1),
        }
    }

    /// Applies the outgoing differential of term `p` to an element of its ambient module.
    pub fn apply(&self, p: usize, v: &Vector) -> Vector {
        let Some(q) = self.next(p) else { return Vector::default() };
        let tf = self.terms[q].ambient();
        let mut acc = tf.zero();
        for t in v.terms() {
            acc = tf.add(&acc, &self.maps[p][t.comp].mul_term(&t.coeff, &t.mon));
        }
        acc
    }

    /// Whether every composite of two differentials vanishes modulo the relations.
    pub fn is_complex(&self, budget: &Budget) -> Result<bool> {
        for p in 0..=self.len() {
            let Some(q) = self.next(p) else { continue };
            if self.next(q).is_none() {
                continue;
            }
            let target = &self.terms[self.next(q).unwrap()];
            for col in &self.maps[p] {
                let img = self.apply(q, col);
                if !target.reduce(&img, budget)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Generators of the cycles of term `p`, in its ambient free module.
    pub fn cycles(&self, p: usize, budget: &Budget) -> Result<Vec<Vector>> {
        let src = self.terms[p].ambient();
        match self.next(p) {
            None => Ok((0..src.rank()).map(|j| src.unit(j)).collect()),
            Some(q) => {
                let tgt = &self.terms[q];
                preimage(src, &self.maps[p], tgt.ambient(), &tgt.all_relations(), budget)
            }
        }
    }

    /// Boundaries in term `p` together with the relations of term `p`.
    pub fn boundaries(&self, p: usize) -> Vec<Vector> {
        let mut out = match self.prev(p) {
            Some(q) => self.maps[q].clone(),
            None => Vec::new(),
        };
        out.extend(self.terms[p].all_relations());
        out
    }

    pub fn homology(&self, p: usize, budget: &Budget) -> Result<Subquotient> {
        Ok(Subquotient {
            free: self.terms[p].ambient().clone(),
            gens: self.cycles(p, budget)?,
            rels: self.boundaries(p),
        })
    }

    pub fn homology_is_zero(&self, p: usize, budget: &Budget) -> Result<bool> {
        self.homology(p, budget)?.is_zero(budget)
    }

    /// Presentation of the `p`-th (co)homology module.
    pub fn homology_presentation(&self, p: usize, budget: &Budget) -> Result<Module> {
        self.homology(p, budget)?.presentation(self.module.ctx(), budget)
    }

    /// Fiber degrees of cycle generators that survive in homology.
    ///
    /// When the homology is annihilated by the fiber variables (the sequence is `x`), it is
    /// generated over `R` in these degrees and vanishes in every other fiber degree.
    pub fn surviving_fiber_degrees(&self, p: usize, budget: &Budget) -> Result<BTreeSet<i64>> {
        let h = self.homology(p, budget)?;
        let gb = groebner_basis(&h.free, &h.rels, budget)?;
        let mut out = BTreeSet::new();
        for g in &h.gens {
            if !gb.contains(g) {
                out.insert(lead_bidegree(&h.free, g).fiber as i64);
            }
        }
        Ok(out)
    }
}

/// `K(a; M)` as a record with both index conventions available.
pub fn koszul_complex(seq: &[Poly], m: &Module, kind: KoszulKind) -> Result<KoszulComplex> {
    if seq.is_empty() {
        return Err(AlgebraError::InvalidInput("Koszul complex needs a nonempty sequence".into()));
    }
    KoszulComplex::new(seq, m, kind)
}

/// Presentation of `H^i(a; M)`.
pub fn koszul_cohomology(k: &KoszulComplex, i: usize, budget: &Budget) -> Result<Module> {
    if k.kind() != KoszulKind::Cohomological || i > k.len() {
        return Err(AlgebraError::InvalidInput(format!("no cohomology index {i}")));
    }
    k.homology_presentation(i, budget)
}

/// The fiber variables of the context, as polynomials.
pub fn fiber_variables(ring: &Arc<PolyRing>) -> Vec<Poly> {
    ring.fiber_range().map(|i| Poly::var(ring, i)).collect()
}

/// `Hom_R(Hom_P(F, P)_{-ν-n}, R)` for a resolution `F` over `P = R'[x]`, `R' = k[y]`.
///
/// `D_k` has basis `(j, u)` with `u` an `x`-monomial of degree `f_{kj} - ν - n`, where `f_{kj}`
/// is the fiber twist of the `j`-th generator of `F_k`. Its homology in index `n - i` is
/// `H^i_{S_+}(M)_ν`.
#[derive(Clone, Debug)]
pub struct SliceComplex {
    base: Arc<RingContext>,
    nu: i64,
    nfiber: usize,
    frees: Vec<FreeModule>,
    bases: Vec<Vec<(usize, Monomial)>>,
    /// `maps[k]` for `k >= 1`: columns of `∂_k: D_k -> D_{k-1}`.
    maps: Vec<Vec<Vector>>,
    /// Whether `D_k = 0` for every `k` beyond the stored terms.
    complete: bool,
}

/// The dualized slice of `res` in fiber degree `nu`, built through index `n + 1`.
pub fn dual_slice_complex(res: &FreeResolution, nu: i64) -> SliceComplex {
    let ctx = res.ctx();
    let ring = ctx.ring();
    let n = ring.nfiber();
    let base = ctx.base_context();
    let bring = base.ring().clone();
    let fr = ring.fiber_range();
    let br = ring.base_range();
    let top = n + 1;
    let mut frees = Vec::new();
    let mut bases: Vec<Vec<(usize, Monomial)>> = Vec::new();
    let mut lookup: Vec<HashMap<(usize, Monomial), usize>> = Vec::new();
    let mut k = 0;
    while k <= top && res.free(k).is_some() {
        let mut basis = Vec::new();
        let mut twists = Vec::new();
        for (j, t) in res.twists(k).iter().enumerate() {
            let d = t.fiber as i64 - nu - n as i64;
            for u in monomials_of_degree(n, d) {
                basis.push((j, u));
                twists.push(Bidegree::new(0, t.base));
            }
        }
        lookup.push(basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect());
        frees.push(FreeModule::new(&bring, twists));
        bases.push(basis);
        k += 1;
    }
    let mut maps = vec![Vec::new()];
    for k in 1..frees.len() {
        let cols = res.differential(k);
        let tgt = &frees[k - 1];
        let mut out = Vec::with_capacity(bases[k].len());
        for (j, u) in &bases[k] {
            let mut terms = Vec::new();
            for t in cols[*j].terms() {
                let xa = t.mon.slice(fr.clone());
                let Some(q) = xa.quotient_of(u) else { continue };
                if let Some(&idx) = lookup[k - 1].get(&(t.comp, q)) {
                    terms.push(Term { comp: idx, mon: t.mon.slice(br.clone()), coeff: t.coeff.clone() });
                }
            }
            out.push(tgt.vector(terms));
        }
        maps.push(out);
    }
    let complete = res.is_complete() || frees.len() > top;
    SliceComplex { base, nu, nfiber: n, frees, bases, maps, complete }
}

impl SliceComplex {
    pub fn nu(&self) -> i64 {
        self.nu
    }

    pub fn base(&self) -> &Arc<RingContext> {
        &self.base
    }

    /// Ranks of the stored terms `D_0, D_1, ...`.
    pub fn ranks(&self) -> Vec<usize> {
        self.frees.iter().map(|f| f.rank()).collect()
    }

    /// Basis labels `(generator of F_k, x-monomial)` of `D_k`.
    pub fn basis(&self, k: usize) -> &[(usize, Monomial)] {
        self.bases.get(k).map_or(&[], |b| b.as_slice())
    }

    /// Columns of `∂_k`, `k >= 1`.
    pub fn differential(&self, k: usize) -> &[Vector] {
        self.maps.get(k).map_or(&[], |m| m.as_slice())
    }

    fn rank_of(&self, k: usize) -> usize {
        self.frees.get(k).map_or(0, |f| f.rank())
    }

    /// Whether `D_k` and `∂_k` are known.
    fn knows(&self, k: usize) -> bool {
        k < self.frees.len() || self.complete
    }

    fn check_index(&self, q: usize) -> Result<()> {
        if self.knows(q + 1) {
            Ok(())
        } else {
            Err(AlgebraError::ResolutionTooShort { needed: q + 1, have: self.frees.len().saturating_sub(1) })
        }
    }

    /// Whether `∂_{k-1} ∂_k = 0`.
    pub fn is_complex(&self) -> bool {
        for k in 2..self.frees.len() {
            let tgt = &self.frees[k - 2];
            for col in &self.maps[k] {
                let mut acc = tgt.zero();
                for t in col.terms() {
                    acc = tgt.add(&acc, &self.maps[k - 1][t.comp].mul_term(&t.coeff, &t.mon));
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    fn rank_of_map(&self, k: usize) -> usize {
        if k == 0 || k >= self.maps.len() {
            return 0;
        }
        linalg::rank(self.maps[k].iter().map(constant_row))
    }

    /// `dim_k H_q(D)` over a field base.
    pub fn homology_dim(&self, q: usize) -> Result<usize> {
        if self.base.nbase() != 0 {
            return Err(AlgebraError::OutOfScope("homology dimension needs a field base".into()));
        }
        self.check_index(q)?;
        Ok(self.rank_of(q) - self.rank_of_map(q) - self.rank_of_map(q + 1))
    }

    /// `H_q(D)` as a subquotient of the free `R'`-module `D_q`.
    pub fn homology(&self, q: usize, budget: &Budget) -> Result<Subquotient> {
        self.check_index(q)?;
        let Some(src) = self.frees.get(q) else {
            let f = FreeModule::new(self.base.ring(), Vec::new());
            return Ok(Subquotient { free: f, gens: Vec::new(), rels: Vec::new() });
        };
        let gens = if q == 0 {
            (0..src.rank()).map(|j| src.unit(j)).collect()
        } else {
            preimage(src, &self.maps[q], &self.frees[q - 1], &[], budget)?
        };
        let rels = self.maps.get(q + 1).cloned().unwrap_or_default();
        Ok(Subquotient { free: src.clone(), gens, rels })
    }

    pub fn homology_is_zero(&self, q: usize, budget: &Budget) -> Result<bool> {
        if self.base.nbase() == 0 {
            return Ok(self.homology_dim(q)? == 0);
        }
        self.homology(q, budget)?.is_zero(budget)
    }

    /// `H^i_{S_+}(M)_ν` as a presented `R`-module.
    pub fn local_cohomology(&self, i: usize, budget: &Budget) -> Result<Module> {
        let q = self.lc_index(i)?;
        self.homology(q, budget)?.presentation(&self.base, budget)
    }

    /// Whether `H^i_{S_+}(M)_ν = 0`.
    pub fn local_cohomology_is_zero(&self, i: usize, budget: &Budget) -> Result<bool> {
        let q = self.lc_index(i)?;
        self.homology_is_zero(q, budget)
    }

    /// `dim_k H^i_{S_+}(M)_ν` over a field base.
    pub fn local_cohomology_dim(&self, i: usize) -> Result<usize> {
        let q = self.lc_index(i)?;
        self.homology_dim(q)
    }

    fn lc_index(&self, i: usize) -> Result<usize> {
        self.nfiber
            .checked_sub(i)
            .ok_or_else(|| AlgebraError::InvalidInput(format!("cohomological index {i} exceeds {}", self.nfiber)))
    }
}

fn constant_row(v: &Vector) -> SparseRow {
    let mut row: SparseRow = v.terms().iter().map(|t| (t.comp, t.coeff.clone())).collect();
    row.sort_by_key(|e| e.0);
    row
}

/// Free module `Hom_P(F_k, P)` with generator twists negated.
fn dual_free(res: &FreeResolution, k: usize) -> FreeModule {
    let ring = res.ctx().ring();
    FreeModule::new(ring, res.twists(k).iter().map(|&t| -t).collect())
}

/// Columns of `Hom(F_k, P) -> Hom(F_{k+1}, P)`, the transpose of `d_{k+1}`.
fn dual_map(res: &FreeResolution, k: usize) -> Vec<Vector> {
    let src = dual_free(res, k);
    let tgt = dual_free(res, k + 1);
    let mut cols: Vec<Vec<Term>> = vec![Vec::new(); src.rank()];
    if res.free(k + 1).is_some() {
        for (l, col) in res.differential(k + 1).iter().enumerate() {
            for t in col.terms() {
                cols[t.comp].push(Term { comp: l, mon: t.mon.clone(), coeff: t.coeff.clone() });
            }
        }
    }
    cols.into_iter().map(|c| tgt.vector(c)).collect()
}

/// `Ext^k_P(M, P)` as a subquotient of `Hom_P(F_k, P)`.
pub fn ext_to_ring(res: &FreeResolution, k: usize, budget: &Budget) -> Result<Subquotient> {
    if !res.knows(k + 1) {
        return Err(AlgebraError::ResolutionTooShort { needed: k + 1, have: res.length() });
    }
    let src = dual_free(res, k);
    let tgt = dual_free(res, k + 1);
    let gens = if tgt.rank() == 0 {
        (0..src.rank()).map(|j| src.unit(j)).collect()
    } else {
        preimage(&src, &dual_map(res, k), &tgt, &[], budget)?
    };
    let rels = if k == 0 { Vec::new() } else { dual_map(res, k - 1) };
    Ok(Subquotient { free: src, gens, rels })
}

/// Outcome of the power-Koszul colimit scan for one cohomological index and degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CechOutcome {
    /// The transition maps were isomorphisms at `t -> t+1 -> t+2`.
    Stabilized { dim: usize, t: u32, dims: Vec<(u32, usize)> },
    NotStabilized { dims: Vec<(u32, usize)> },
}

impl CechOutcome {
    pub fn dim(&self) -> Option<usize> {
        match self {
            CechOutcome::Stabilized { dim, .. } => Some(*dim),
            CechOutcome::NotStabilized { .. } => None,
        }
    }
}

/// Degree pieces `M_d` over a field base, with coordinates in the standard monomial basis.
struct Pieces<'a> {
    m: &'a Module,
    gb: &'a crate::groebner::GroebnerBasis,
    bases: HashMap<i64, (Vec<(usize, Monomial)>, HashMap<(usize, Monomial), usize>)>,
    nf: HashMap<(usize, Monomial), SparseRow>,
}

impl<'a> Pieces<'a> {
    fn new(m: &'a Module, budget: &Budget) -> Result<Pieces<'a>> {
        let gb = m.relation_gb(budget)?;
        Ok(Pieces { m, gb, bases: HashMap::new(), nf: HashMap::new() })
    }

    fn basis(&mut self, d: i64) -> &(Vec<(usize, Monomial)>, HashMap<(usize, Monomial), usize>) {
        let (m, gb) = (self.m, self.gb);
        self.bases.entry(d).or_insert_with(|| {
            let n = m.ctx().ring().nvars();
            let mut list = Vec::new();
            for (j, t) in m.twists().iter().enumerate() {
                for u in monomials_of_degree(n, d - t.fiber as i64) {
                    if !gb.is_lead_multiple(j, &u) {
                        list.push((j, u));
                    }
                }
            }
            let idx = list.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
            (list, idx)
        })
    }

    fn dim(&mut self, d: i64) -> usize {
        self.basis(d).0.len()
    }

    /// Coordinates of `mon * e_comp` in degree `d`.
    fn coords_of(&mut self, comp: usize, mon: Monomial, d: i64) -> SparseRow {
        if let Some(r) = self.nf.get(&(comp, mon.clone())) {
            return r.clone();
        }
        let fm = self.m.ambient();
        let v = fm.vector(vec![Term { comp, mon: mon.clone(), coeff: fm.ring().field().one() }]);
        let red = self.gb.reduce(&v);
        let idx = &self.basis(d).1;
        let mut row: SparseRow = red.terms().iter().map(|t| (idx[&(t.comp, t.mon.clone())], t.coeff.clone())).collect();
        row.sort_by_key(|e| e.0);
        self.nf.insert((comp, mon), row.clone());
        row
    }

    /// Coordinates of `f * b` where `b` is basis element `bi` of degree `d`.
    fn multiply(&mut self, f: &Poly, d: i64, bi: usize, target_deg: i64) -> SparseRow {
        let (comp, u) = self.basis(d).0[bi].clone();
        let mut acc: SparseRow = Vec::new();
        for (mon, c) in f.terms() {
            let row = self.coords_of(comp, u.mul(mon), target_deg);
            acc = linalg::sub_scaled(&acc, &-c, &row);
        }
        acc
    }
}

/// Power-Koszul complex pieces `V^p_t = ⊕_{|J|=p} M_{γ + t deg a_J}` for one `t`.
struct PowerSlice {
    /// Per degree `p`: the list of blocks `(mask, degree, offset)` and the total dimension.
    blocks: Vec<(Vec<(u64, i64, usize)>, usize)>,
}

fn power_slice(p_range: &[usize], r: usize, degs: &[i64], gamma: i64, t: u32, pieces: &mut Pieces) -> PowerSlice {
    let subsets = subsets_by_size(r);
    let mut blocks = vec![(Vec::new(), 0usize); r + 1];
    for &p in p_range {
        let mut off = 0;
        let mut list = Vec::new();
        for &mask in &subsets[p] {
            let dj: i64 = (0..r).filter(|j| mask >> j & 1 == 1).map(|j| degs[j]).sum();
            let d = gamma + t as i64 * dj;
            list.push((mask, d, off));
            off += pieces.dim(d);
        }
        blocks[p] = (list, off);
    }
    PowerSlice { blocks }
}

/// Rows of `d^p` on `V^p_t`, one per basis element, in `V^{p+1}_t` coordinates.
fn power_differential(ps: &PowerSlice, p: usize, powers: &[Poly], pieces: &mut Pieces) -> Vec<SparseRow> {
    let r = powers.len();
    let mut rows = Vec::new();
    let (src, _) = &ps.blocks[p];
    let (tgt, _) = &ps.blocks[p + 1];
    let tgt_of: HashMap<u64, (i64, usize)> = tgt.iter().map(|&(m, d, o)| (m, (d, o))).collect();
    for &(mask, d, _) in src {
        for bi in 0..pieces.dim(d) {
            let mut acc: SparseRow = Vec::new();
            for j in 0..r {
                if mask >> j & 1 == 1 {
                    continue;
                }
                let (td, toff) = tgt_of[&(mask | 1 << j)];
                let img = pieces.multiply(&powers[j], d, bi, td);
                let shifted: SparseRow = img.into_iter().map(|(c, v)| (c + toff, v)).collect();
                let one = pieces.m.ctx().ring().field().one();
                let coeff = if sign_of(mask, j) { one } else { -&one };
                acc = linalg::sub_scaled(&acc, &coeff, &shifted);
            }
            rows.push(acc);
        }
    }
    rows
}

/// Rows of the transition `V^p_t -> V^p_{t+1}`, multiplication by `a_J` on block `J`.
fn power_transition(from: &PowerSlice, to: &PowerSlice, p: usize, seq: &[Poly], pieces: &mut Pieces) -> Vec<SparseRow> {
    let ring = pieces.m.ctx().ring().clone();
    let (src, _) = &from.blocks[p];
    let to_of: HashMap<u64, (i64, usize)> = to.blocks[p].0.iter().map(|&(m, d, o)| (m, (d, o))).collect();
    let mut rows = Vec::new();
    for &(mask, d, _) in src {
        let mut aj = Poly::one(&ring);
        for (j, a) in seq.iter().enumerate() {
            if mask >> j & 1 == 1 {
                aj = aj.try_mul(a).expect("same ring");
            }
        }
        let (td, toff) = to_of[&mask];
        for bi in 0..pieces.dim(d) {
            let img = pieces.multiply(&aj, d, bi, td);
            rows.push(img.into_iter().map(|(c, v)| (c + toff, v)).collect());
        }
    }
    rows
}

/// Data of `H^i(a^t; M)_γ` needed for the comparison maps.
struct StepData {
    slice: PowerSlice,
    dim: usize,
    cycles: Vec<SparseRow>,
    boundaries: Vec<SparseRow>,
}

fn step(seq: &[Poly], i: usize, gamma: i64, t: u32, pieces: &mut Pieces) -> StepData {
    let r = seq.len();
    let degs: Vec<i64> = seq.iter().map(|a| lead_poly_bidegree(a).fiber as i64).collect();
    let powers: Vec<Poly> = seq.iter().map(|a| a.pow(t)).collect();
    let mut range = vec![i];
    if i > 0 {
        range.push(i - 1);
    }
    if i < r {
        range.push(i + 1);
    }
    let slice = power_slice(&range, r, &degs, gamma, t, pieces);
    let one = pieces.m.ctx().ring().field().one();
    let cycles = if i < r {
        let rows = power_differential(&slice, i, &powers, pieces);
        linalg::kernel(&rows, &one)
    } else {
        (0..slice.blocks[i].1).map(|c| vec![(c, one.clone())]).collect()
    };
    let boundaries = if i > 0 { power_differential(&slice, i - 1, &powers, pieces) } else { Vec::new() };
    let dim = cycles.len() - linalg::rank(boundaries.iter().cloned());
    StepData { slice, dim, cycles, boundaries }
}

/// Rank of the map `H^i(a^t) -> H^i(a^{t+1})` induced by the transition.
fn induced_rank(seq: &[Poly], i: usize, a: &StepData, b: &StepData, pieces: &mut Pieces) -> usize {
    let trans = power_transition(&a.slice, &b.slice, i, seq, pieces);
    let mut images = Vec::with_capacity(a.cycles.len());
    for z in &a.cycles {
        let mut acc: SparseRow = Vec::new();
        for (idx, c) in z {
            acc = linalg::sub_scaled(&acc, &-c, &trans[*idx]);
        }
        images.push(acc);
    }
    let base = linalg::rank(b.boundaries.iter().cloned());
    let mut all = b.boundaries.clone();
    all.extend(images);
    linalg::rank(all) - base
}

/// Scans `H^i(a^t; M)_γ` for `t = t_start, t_start + 1, ...` up to `t_max + 2`.
///
/// Reports the dimension at the first `t <= t_max` for which both transitions
/// `t -> t+1 -> t+2` are isomorphisms. Field base, homogeneous `a` of positive fiber degree.
pub fn cech_power_limit(
    seq: &[Poly],
    m: &Module,
    i: usize,
    gamma: i64,
    t_start: u32,
    t_max: u32,
    budget: &Budget,
) -> Result<CechOutcome> {
    if !m.ctx().is_field_base() {
        return Err(AlgebraError::OutOfScope("the power-Koszul oracle needs a field base".into()));
    }
    if seq.is_empty() || i > seq.len() {
        return Err(AlgebraError::InvalidInput(format!("index {i} outside 0..={}", seq.len())));
    }
    if seq.iter().any(|a| !a.is_bihomogeneous() || lead_poly_bidegree(a).fiber <= 0) {
        return Err(AlgebraError::InvalidInput("sequence must be homogeneous of positive degree".into()));
    }
    m.check_bigraded()?;
    let t_start = t_start.max(1);
    let mut pieces = Pieces::new(m, budget)?;
    let mut dims = Vec::new();
    let mut prev = step(seq, i, gamma, t_start, &mut pieces);
    dims.push((t_start, prev.dim));
    let mut isos = Vec::new();
    let mut t = t_start;
    while t < t_max + 2 {
        budget.charge(1)?;
        let next = step(seq, i, gamma, t + 1, &mut pieces);
        dims.push((t + 1, next.dim));
        let iso = prev.dim == next.dim && induced_rank(seq, i, &prev, &next, &mut pieces) == prev.dim;
        isos.push(iso);
        let k = isos.len();
        if k >= 2 && isos[k - 1] && isos[k - 2] {
            let at = t - 1;
            let dim = dims[dims.len() - 3].1;
            return Ok(CechOutcome::Stabilized { dim, t: at, dims });
        }
        prev = next;
        t += 1;
    }
    Ok(CechOutcome::NotStabilized { dims })
}

/// Smallest `t` at which `H^i(x^t; M)_γ` is provably the colimit, given `reg(M)` over a field.
///
/// The comparison `H^n(x^t; P(-d))_γ -> H^n_{S_+}(P(-d))_γ` is onto once
/// `t >= d - γ - n + 1`, and the twists of `F_k` in a minimal resolution are at most `reg + k`.
pub fn cech_start(reg: i64, gamma: i64, i: usize) -> u32 {
    (reg - gamma - i as i64 + 2).max(1) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::MonomialOrder;
    use crate::resolution::free_resolution;
    use crate::scalar::Field;

    fn ctx(base: &[&str], fiber: &[&str]) -> Arc<RingContext> {
        RingContext::polynomial(PolyRing::new(Field::Rational, base, fiber, MonomialOrder::DegRevLex).unwrap())
    }

    fn polys(c: &Arc<RingContext>, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|x| Poly::parse(c.ring(), x).unwrap()).collect()
    }

    fn b() -> Budget {
        Budget::unlimited()
    }

    #[test]
    fn koszul_on_regular_sequence() {
        let c = ctx(&["y1", "y2"], &[]);
        let m = Module::free(&c, vec![Bidegree::ZERO]);
        let k = koszul_complex(&polys(&c, &["y1", "y2"]), &m, KoszulKind::Cohomological).unwrap();
        assert!(k.is_complex(&b()).unwrap());
        assert!(k.homology_is_zero(0, &b()).unwrap());
        assert!(k.homology_is_zero(1, &b()).unwrap());
        let h2 = koszul_cohomology(&k, 2, &b()).unwrap();
        assert_eq!(h2.rank(), 1);
        let gb = h2.relation_gb(&b()).unwrap();
        assert_eq!(gb.len(), 2);
        assert_eq!(h2.twists(), &[Bidegree::new(0, -2)]);
    }

    #[test]
    fn h0_is_annihilator() {
        let c = ctx(&["y"], &[]);
        let m = Module::cyclic(&c, &polys(&c, &["y^2"]));
        let k = koszul_complex(&polys(&c, &["y"]), &m, KoszulKind::Cohomological).unwrap();
        let h0 = koszul_cohomology(&k, 0, &b()).unwrap();
        assert!(!h0.is_zero(&b()).unwrap());
        assert_eq!(h0.twists(), &[Bidegree::new(0, 1)]);
    }

    #[test]
    fn unit_kills_koszul() {
        let c = ctx(&["y"], &["x"]);
        let m = Module::cyclic(&c, &polys(&c, &["y*x"]));
        let k = koszul_complex(&polys(&c, &["1"]), &m, KoszulKind::Cohomological).unwrap();
        assert!(k.homology_is_zero(0, &b()).unwrap());
        assert!(k.homology_is_zero(1, &b()).unwrap());
    }

    #[test]
    fn depth_one_sequence_has_h1() {
        let c = ctx(&["y1", "y2", "y3"], &[]);
        let m = Module::free(&c, vec![Bidegree::ZERO]);
        let k = koszul_complex(&polys(&c, &["y1*y2", "y1*y3"]), &m, KoszulKind::Cohomological).unwrap();
        assert!(k.homology_is_zero(0, &b()).unwrap());
        assert!(!k.homology_is_zero(1, &b()).unwrap());
    }

    #[test]
    fn top_cohomology_is_quotient() {
        let c = ctx(&[], &["x1", "x2"]);
        let m = Module::cyclic(&c, &polys(&c, &["x1^3"]));
        let seq = polys(&c, &["x1^2", "x2"]);
        let k = koszul_complex(&seq, &m, KoszulKind::Cohomological).unwrap();
        let top = koszul_cohomology(&k, 2, &b()).unwrap();
        // M/(a)M = k[x1,x2]/(x1^2, x2), shifted by deg a = 3
        let expect = Module::cyclic(&c, &seq).shifted(Bidegree::new(3, 0));
        assert_eq!(FiberSupportDims::of(&top), FiberSupportDims::of(&expect));
    }

    /// Dimensions of a field-base module in a few degrees, for comparisons.
    #[derive(Debug, PartialEq)]
    struct FiberSupportDims(Vec<usize>);

    impl FiberSupportDims {
        fn of(m: &Module) -> FiberSupportDims {
            let mut p = Pieces::new(m, &Budget::unlimited()).unwrap();
            FiberSupportDims((-6..6).map(|d| p.dim(d)).collect())
        }
    }

    #[test]
    fn homological_self_duality() {
        let c = ctx(&[], &["x1", "x2", "x3"]);
        let m = Module::cyclic(&c, &polys(&c, &["x1^2", "x1*x2", "x3^2*x2"]));
        let seq = fiber_variables(c.ring());
        let coh = KoszulComplex::new(&seq, &m, KoszulKind::Cohomological).unwrap();
        let hom = KoszulComplex::new(&seq, &m, KoszulKind::Homological).unwrap();
        assert!(hom.is_complex(&b()).unwrap());
        for i in 0..=3 {
            let a = coh.homology_presentation(i, &b()).unwrap();
            let h = hom.homology_presentation(3 - i, &b()).unwrap();
            let dims_a = FiberSupportDims::of(&a).0;
            let dims_h = FiberSupportDims::of(&h).0;
            // H^i_d = H_{3-i, d+3}
            assert_eq!(&dims_a[..9], &dims_h[3..], "index {i}");
        }
    }

    #[test]
    fn dual_slice_polynomial_ring_top() {
        let c = ctx(&[], &["x1"]);
        let m = Module::free(&c, vec![Bidegree::ZERO]);
        let res = free_resolution(&m, None, &b()).unwrap();
        let d = dual_slice_complex(&res, -1);
        assert_eq!(d.local_cohomology_dim(1).unwrap(), 1);
        assert_eq!(d.local_cohomology_dim(0).unwrap(), 0);
        assert_eq!(dual_slice_complex(&res, 0).local_cohomology_dim(1).unwrap(), 0);
    }

    #[test]
    fn dual_slice_torsion_module() {
        let c = ctx(&[], &["x1"]);
        let m = Module::cyclic(&c, &polys(&c, &["x1"]));
        let res = free_resolution(&m, None, &b()).unwrap();
        assert_eq!(dual_slice_complex(&res, 0).local_cohomology_dim(0).unwrap(), 1);
        assert_eq!(dual_slice_complex(&res, 1).local_cohomology_dim(0).unwrap(), 0);
    }

    #[test]
    fn dual_slice_over_base_ring() {
        // M = Q[y,x]/(yx): H^0_{S+}(M)_0 = yQ[y], H^1 lives in negative degrees
        let c = ctx(&["y"], &["x"]);
        let m = Module::cyclic(&c, &polys(&c, &["y*x"]));
        let res = free_resolution(&m, None, &b()).unwrap();
        let d0 = dual_slice_complex(&res, 0);
        assert!(d0.is_complex());
        let h0 = d0.local_cohomology(0, &b()).unwrap();
        assert_eq!(h0.rank(), 1);
        assert_eq!(h0.twists(), &[Bidegree::new(0, 1)]);
        assert!(h0.relation_gb(&b()).unwrap().is_empty());
        assert!(d0.local_cohomology_is_zero(1, &b()).unwrap());
        assert!(dual_slice_complex(&res, 1).local_cohomology_is_zero(0, &b()).unwrap());
        assert!(!dual_slice_complex(&res, -1).local_cohomology_is_zero(1, &b()).unwrap());
    }

    #[test]
    fn short_resolution_rejected() {
        let c = ctx(&[], &["x1", "x2"]);
        let m = Module::cyclic(&c, &polys(&c, &["x1", "x2"]));
        let res = free_resolution(&m, Some(1), &b()).unwrap();
        let d = dual_slice_complex(&res, 0);
        assert!(matches!(d.local_cohomology_dim(0), Err(AlgebraError::ResolutionTooShort { .. })));
        assert!(d.local_cohomology_dim(2).is_ok());
    }

    #[test]
    fn cech_oracle_examples() {
        let c = ctx(&[], &["x1", "x2"]);
        let s = Module::free(&c, vec![Bidegree::ZERO]);
        let x = fiber_variables(c.ring());
        let out = cech_power_limit(&x, &s, 2, -2, 1, 8, &b()).unwrap();
        assert_eq!(out.dim(), Some(1));
        assert_eq!(cech_power_limit(&x, &s, 0, 3, 1, 8, &b()).unwrap().dim(), Some(0));
        let c1 = ctx(&[], &["x1"]);
        let s1 = Module::free(&c1, vec![Bidegree::ZERO]);
        let x1 = fiber_variables(c1.ring());
        assert_eq!(cech_power_limit(&x1, &s1, 1, 0, 1, 8, &b()).unwrap().dim(), Some(0));
        assert_eq!(cech_power_limit(&x1, &s1, 1, -3, 1, 8, &b()).unwrap().dim(), Some(1));
    }

    #[test]
    fn cech_agrees_with_dual_slices() {
        let c = ctx(&[], &["x1", "x2"]);
        let m = Module::from_columns(
            &c,
            vec![Bidegree::ZERO, Bidegree::new(1, 0)],
            &[polys(&c, &["x1^2", "x2"]), polys(&c, &["x1*x2", "0"]), polys(&c, &["0", "x1^2"])],
        )
        .unwrap();
        let res = free_resolution(&m, None, &b()).unwrap();
        let reg = res.betti_table().unwrap().fiber_regularity().unwrap();
        let x = fiber_variables(c.ring());
        for gamma in -5..4 {
            let d = dual_slice_complex(&res, gamma);
            for i in 0..=2 {
                let t0 = cech_start(reg, gamma, i);
                let cech = cech_power_limit(&x, &m, i, gamma, t0, t0, &b()).unwrap();
                assert_eq!(cech.dim(), Some(d.local_cohomology_dim(i).unwrap()), "i={i} γ={gamma}");
            }
        }
    }

    #[test]
    fn ext_of_polynomial_ring_quotient() {
        // Ext^1(S/(x1), S) = S/(x1) (1)
        let c = ctx(&[], &["x1", "x2"]);
        let m = Module::cyclic(&c, &polys(&c, &["x1"]));
        let res = free_resolution(&m, None, &b()).unwrap();
        let e1 = ext_to_ring(&res, 1, &b()).unwrap().presentation(&c, &b()).unwrap();
        assert_eq!(e1.twists(), &[Bidegree::new(-1, 0)]);
        assert!(ext_to_ring(&res, 0, &b()).unwrap().is_zero(&b()).unwrap());
    }
}
