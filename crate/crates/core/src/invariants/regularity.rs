//! Castelnuovo–Mumford regularity with respect to `S_+`, computed by independent routes that
//! must agree.

use std::fmt;

use crate::budget::Budget;
use crate::complexes::{fiber_variables, KoszulComplex, KoszulKind};
use crate::error::{AlgebraError, Result};
use crate::extended::ExtInt;
use crate::free::{FreeModule, Term};
use crate::module::{preimage, Module};
use crate::resolution::{free_resolution, FreeResolution};
use crate::groebner::groebner_basis;
use crate::ring::Bidegree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegularityMethod {
    /// `max(a - i)` over bigraded Betti numbers `β_{i,(a,b)}` of the minimal resolution over `P`.
    Betti,
    /// `max(a - i)` over `Tor^P_i(M, P/(x))_a ≠ 0`, read from the resolution with `x = 0`.
    TorModX,
    /// `max(t - i)` over `H_i(x; M)_t ≠ 0`.
    KoszulHomology,
    /// `max(t + i)` over `H^i(x; M)_t ≠ 0`.
    KoszulCohomology,
}

impl RegularityMethod {
    pub fn tag(self) -> &'static str {
        match self {
            RegularityMethod::Betti => "betti",
            RegularityMethod::TorModX => "tor-mod-x",
            RegularityMethod::KoszulHomology => "koszul-homology",
            RegularityMethod::KoszulCohomology => "koszul-cohomology",
        }
    }
}

impl fmt::Display for RegularityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodValue {
    pub method: RegularityMethod,
    pub value: ExtInt,
    /// Homological or cohomological index and fiber degree attaining the value.
    pub witness: Option<(usize, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityResult {
    pub value: ExtInt,
    pub methods: Vec<MethodValue>,
}

fn best(cands: impl IntoIterator<Item = (usize, i64, i64)>) -> (ExtInt, Option<(usize, i64)>) {
    let mut out = (ExtInt::NegInf, None);
    for (i, t, v) in cands {
        if ExtInt::Finite(v) > out.0 {
            out = (ExtInt::Finite(v), Some((i, t)));
        }
    }
    out
}

pub fn by_betti(res: &FreeResolution) -> Result<MethodValue> {
    let table = res.betti_table()?;
    let (value, witness) = best(table.entries.keys().map(|&(i, d)| (i, d.fiber as i64, d.fiber as i64 - i as i64)));
    Ok(MethodValue { method: RegularityMethod::Betti, value, witness })
}

/// Tensoring a resolution over `P` with `P/(x) = k[y]` computes `Tor^P(M, P/(x)) = H(x; M)`.
pub fn by_tor_mod_x(res: &FreeResolution, budget: &Budget) -> Result<MethodValue> {
    let ring = res.ctx().ring();
    let base = ring.base_ring();
    let br = ring.base_range();
    let fr = ring.fiber_range();
    let len = (0..).take_while(|&k| res.free(k).is_some()).count();
    let mut cands = Vec::new();
    // Restricted to fiber degree a, with x = 0.
    let restrict = |k: usize, a: i32| -> (FreeModule, Vec<usize>) {
        let idx: Vec<usize> = (0..res.rank(k)).filter(|&j| res.twists(k)[j].fiber == a).collect();
        let tw = idx.iter().map(|&j| Bidegree::new(0, res.twists(k)[j].base)).collect();
        (FreeModule::new(&base, tw), idx)
    };
    let mut degrees: Vec<i32> = (0..len).flat_map(|k| res.twists(k).iter().map(|t| t.fiber)).collect();
    degrees.sort_unstable();
    degrees.dedup();
    for k in 0..len {
        for &a in &degrees {
            let (src, idx) = restrict(k, a);
            if idx.is_empty() {
                continue;
            }
            let map_of = |level: usize, cols: &[usize], tgt: &FreeModule, tgt_idx: &[usize]| {
                let pos: std::collections::HashMap<usize, usize> =
                    tgt_idx.iter().enumerate().map(|(p, &j)| (j, p)).collect();
                cols.iter()
                    .map(|&c| {
                        let terms = res.differential(level)[c]
                            .terms()
                            .iter()
                            .filter(|t| t.mon.degree_in(fr.clone()) == 0)
                            .filter_map(|t| {
                                pos.get(&t.comp).map(|&p| Term { comp: p, mon: t.mon.slice(br.clone()), coeff: t.coeff.clone() })
                            })
                            .collect();
                        tgt.vector(terms)
                    })
                    .collect::<Vec<_>>()
            };
            let cycles = if k == 0 {
                (0..src.rank()).map(|j| src.unit(j)).collect()
            } else {
                let (tgt, tidx) = restrict(k - 1, a);
                let imgs = map_of(k, &idx, &tgt, &tidx);
                preimage(&src, &imgs, &tgt, &[], budget)?
            };
            let bounds = if res.free(k + 1).is_some() {
                let (_, uidx) = restrict(k + 1, a);
                map_of(k + 1, &uidx, &src, &idx)
            } else {
                Vec::new()
            };
            let gb = groebner_basis(&src, &bounds, budget)?;
            if cycles.iter().any(|z| !gb.contains(z)) {
                cands.push((k, a as i64, a as i64 - k as i64));
            }
        }
    }
    let (value, witness) = best(cands);
    Ok(MethodValue { method: RegularityMethod::TorModX, value, witness })
}

pub fn by_koszul(m: &Module, kind: KoszulKind, budget: &Budget) -> Result<MethodValue> {
    let x = fiber_variables(m.ctx().ring());
    let k = KoszulComplex::new(&x, m, kind)?;
    let mut cands = Vec::new();
    for p in 0..=k.len() {
        for t in k.surviving_fiber_degrees(p, budget)? {
            let v = match kind {
                KoszulKind::Homological => t - p as i64,
                KoszulKind::Cohomological => t + p as i64,
            };
            cands.push((p, t, v));
        }
    }
    let (value, witness) = best(cands);
    let method = match kind {
        KoszulKind::Homological => RegularityMethod::KoszulHomology,
        KoszulKind::Cohomological => RegularityMethod::KoszulCohomology,
    };
    Ok(MethodValue { method, value, witness })
}

/// `reg(M)`, required to agree across every route that applies to the base ring.
///
/// Betti numbers over `P` are used for polynomial bases; a quotient base replaces them with
/// the resolution reduced modulo `x`, which stays valid there.
pub fn regularity(m: &Module, budget: &Budget) -> Result<RegularityResult> {
    m.check_bigraded()?;
    let res = free_resolution(m, None, budget)?;
    regularity_with(m, &res, budget)
}

pub fn regularity_with(m: &Module, res: &FreeResolution, budget: &Budget) -> Result<RegularityResult> {
    let ctx = m.ctx();
    let mut methods = Vec::new();
    if ctx.is_polynomial_base() {
        methods.push(by_betti(res)?);
    }
    if !ctx.is_field_base() {
        methods.push(by_tor_mod_x(res, budget)?);
    }
    methods.push(by_koszul(m, KoszulKind::Homological, budget)?);
    methods.push(by_koszul(m, KoszulKind::Cohomological, budget)?);
    let value = methods[0].value;
    if let Some(bad) = methods.iter().find(|mv| mv.value != value) {
        let detail: Vec<String> = methods.iter().map(|mv| format!("{}={}", mv.method, mv.value)).collect();
        return Err(AlgebraError::Tripwire(format!(
            "regularity methods disagree ({} differs): {}",
            bad.method,
            detail.join(", ")
        )));
    }
    Ok(RegularityResult { value, methods })
}
