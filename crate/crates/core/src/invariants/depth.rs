//! `depth_I(N)` by Koszul cohomology, by the Ext characterization of grade, and by explicit
//! regular sequences of generic combinations.

use std::sync::Arc;

use crate::budget::Budget;
use crate::complexes::{KoszulComplex, KoszulKind};
use crate::error::{AlgebraError, Result};
use crate::extended::ExtInt;
use crate::free::{FreeModule, Term, Vector};
use crate::ideal::Ideal;
use crate::module::{colon_submodule, preimage, submodule_contains, Module, Subquotient};
use crate::poly::Poly;
use crate::resolution::free_resolution;
use crate::ring::{PolyRing, RingContext};

/// `depth_I(N)` with the first nonvanishing Koszul index as witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthResult {
    pub value: ExtInt,
    /// Cohomology indices checked and found zero before the witness.
    pub vanishing: Vec<usize>,
}

/// Smallest `i` with `H^i(a; N) ≠ 0`; `+∞` when all vanish, i.e. `N = IN`.
pub fn depth_wrt(gens: &[Poly], n: &Module, budget: &Budget) -> Result<DepthResult> {
    let k = KoszulComplex::new(gens, n, KoszulKind::Cohomological)?;
    let mut vanishing = Vec::new();
    for p in 0..=k.len() {
        if !k.homology_is_zero(p, budget)? {
            return Ok(DepthResult { value: ExtInt::Finite(p as i64), vanishing });
        }
        vanishing.push(p);
    }
    Ok(DepthResult { value: ExtInt::PosInf, vanishing })
}

/// `min{i : Ext^i_P(P/I, N) ≠ 0}`, from a minimal resolution of `P/I` over the ambient
/// polynomial ring and `Hom(-, N)`. Requires homogeneous generators.
pub fn depth_ext_oracle(gens: &[Poly], n: &Module, budget: &Budget) -> Result<ExtInt> {
    let ring = n.ctx().ring().clone();
    let pctx = RingContext::polynomial(ring.clone());
    let quotient = Module::cyclic(&pctx, gens);
    let res = free_resolution(&quotient, None, budget)?;
    let len = (0..).take_while(|&k| res.free(k).is_some()).count();
    let r = n.rank();
    // Hom(F_k, N) sits in ⊕_{l ∈ F_k} A, with A the ambient module of N.
    let hom_free = |k: usize| -> FreeModule {
        let tw = res.twists(k).iter().flat_map(|&d| n.twists().iter().map(move |&t| t - d)).collect();
        FreeModule::new(&ring, tw)
    };
    let hom_rels = |k: usize, f: &FreeModule| -> Vec<Vector> {
        let mut out = Vec::new();
        for l in 0..res.rank(k) {
            for rel in n.all_relations() {
                out.push(f.resort(rel.shifted(l * r)));
            }
        }
        out
    };
    // Columns of Hom(F_{k-1}, N) -> Hom(F_k, N), φ ↦ φ ∘ d_k.
    let hom_map = |k: usize, src: &FreeModule, tgt: &FreeModule| -> Vec<Vector> {
        let mut cols: Vec<Vec<Term>> = vec![Vec::new(); src.rank()];
        for (l, col) in res.differential(k).iter().enumerate() {
            for t in col.terms() {
                for s in 0..r {
                    cols[t.comp * r + s].push(Term { comp: l * r + s, mon: t.mon.clone(), coeff: t.coeff.clone() });
                }
            }
        }
        cols.into_iter().map(|c| tgt.vector(c)).collect()
    };
    for k in 0..len {
        budget.charge(1)?;
        let src = hom_free(k);
        if src.rank() == 0 {
            continue;
        }
        let gens_k = if k + 1 < len {
            let tgt = hom_free(k + 1);
            let rels = hom_rels(k + 1, &tgt);
            preimage(&src, &hom_map(k + 1, &src, &tgt), &tgt, &rels, budget)?
        } else {
            (0..src.rank()).map(|j| src.unit(j)).collect()
        };
        let mut rels = hom_rels(k, &src);
        if k > 0 {
            rels.extend(hom_map(k, &hom_free(k - 1), &src));
        }
        let h = Subquotient { free: src, gens: gens_k, rels };
        if !h.is_zero(budget)? {
            return Ok(ExtInt::Finite(k as i64));
        }
    }
    Ok(ExtInt::PosInf)
}

/// Whether `f` is a nonzerodivisor on `N`: `(0 :_N f) = 0`.
pub fn is_nonzerodivisor(f: &Poly, n: &Module, budget: &Budget) -> Result<bool> {
    let killed = colon_submodule(n, &[], std::slice::from_ref(f), budget)?;
    submodule_contains(n, &[], &killed, budget)
}

#[derive(Clone, Debug)]
pub enum NorthcottOutcome {
    /// `f_1, ..., f_r` form an `N[T]`-regular sequence inside `I·A[T]`.
    Certified { ring: Arc<PolyRing>, sequence: Vec<Poly> },
    /// `f_step` is a zero divisor on `N[T]/(f_1..f_{step-1})`, killing `witness`.
    Failed { step: usize, sequence: Vec<Poly>, witness: Option<Vector> },
    /// The quotient by the full sequence is zero, so it is not a regular sequence.
    QuotientVanishes { sequence: Vec<Poly> },
}

impl NorthcottOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, NorthcottOutcome::Certified { .. })
    }
}

/// Adjoins fresh variables `T_{i,j}` and checks that `f_i = Σ_j T_{i,j} a_j`, `i = 1..r`, is
/// a regular sequence on `N[T]`. `N` must be a module over a ring without fiber variables.
pub fn northcott_certificate(gens: &[Poly], n: &Module, r: usize, budget: &Budget) -> Result<NorthcottOutcome> {
    let ring = n.ctx().ring();
    if ring.nfiber() != 0 {
        return Err(AlgebraError::InvalidInput("Northcott certificate needs a module over the base ring".into()));
    }
    if r == 0 {
        return Ok(NorthcottOutcome::Certified { ring: ring.clone(), sequence: Vec::new() });
    }
    let s = gens.len();
    let mut names = Vec::new();
    for i in 0..r {
        for j in 0..s {
            let mut name = format!("T{}_{}", i + 1, j + 1);
            while ring.var_index(&name).is_some() {
                name.insert(0, '_');
            }
            names.push(name);
        }
    }
    let big = ring.base_with_extra(&names)?;
    let nv = ring.nvars();
    let map: Vec<usize> = (0..nv).collect();
    let lift = |p: &Poly| p.map_vars(&big, &map);
    let rels = n.ctx().base_relations().iter().map(lift).collect();
    let bctx = RingContext::new(big.clone(), rels)?;
    let bfree = FreeModule::new(&big, n.twists().to_vec());
    let lift_vec = |v: &Vector| -> Vector {
        let polys = n.ambient().to_polys(v);
        bfree.from_polys(&polys.iter().map(lift).collect::<Vec<_>>())
    };
    let nt = Module::new(&bctx, n.twists().to_vec(), n.relations().iter().map(lift_vec).collect())?;
    let a: Vec<Poly> = gens.iter().map(lift).collect();
    let mut seq = Vec::new();
    for i in 0..r {
        let mut f = Poly::zero(&big);
        for (j, aj) in a.iter().enumerate() {
            let t = Poly::var(&big, nv + i * s + j);
            f = f.try_add(&t.try_mul(aj)?)?;
        }
        seq.push(f);
    }
    let mut current = nt.clone();
    for (step, f) in seq.iter().enumerate() {
        budget.charge(1)?;
        let killed = colon_submodule(&current, &[], std::slice::from_ref(f), budget)?;
        let gb = current.relation_gb(budget)?;
        if let Some(w) = killed.iter().find(|v| !gb.contains(v)) {
            return Ok(NorthcottOutcome::Failed { step: step + 1, sequence: seq, witness: Some(w.clone()) });
        }
        if f.is_zero() {
            return Ok(NorthcottOutcome::Failed { step: step + 1, sequence: seq, witness: None });
        }
        current = current.mod_ideal(std::slice::from_ref(f));
    }
    if current.is_zero(budget)? {
        return Ok(NorthcottOutcome::QuotientVanishes { sequence: seq });
    }
    Ok(NorthcottOutcome::Certified { ring: big, sequence: seq })
}

/// Ideal generated by `gens` inside the ring of `n`; convenience for callers holding an ideal.
pub fn depth_of_ideal(i: &Ideal, n: &Module, budget: &Budget) -> Result<DepthResult> {
    depth_wrt(i.gens(), n, budget)
}
