//! Graded local cohomology `H^i_{S_+}(M)_ν` through dualized resolution slices, and the
//! invariants read off from it.

use crate::budget::Budget;
use crate::complexes::{dual_slice_complex, ext_to_ring, fiber_variables, KoszulComplex, KoszulKind, SliceComplex};
use crate::error::{AlgebraError, Result};
use crate::extended::ExtInt;
use crate::module::{saturation, Module, Subquotient};
use crate::resolution::{free_resolution, FreeResolution};
use crate::ring::RingContext;
use crate::support::FiberSupport;

/// A complete minimal resolution of `M`, kept for repeated slice queries.
#[derive(Clone, Debug)]
pub struct LocalCohomology {
    module: Module,
    res: FreeResolution,
}

impl LocalCohomology {
    pub fn new(m: &Module, budget: &Budget) -> Result<LocalCohomology> {
        let res = free_resolution(m, None, budget)?;
        Ok(LocalCohomology { module: m.clone(), res })
    }

    /// Uses a resolution computed elsewhere, which must resolve `m` and be complete.
    pub fn from_resolution(m: &Module, res: FreeResolution) -> Result<LocalCohomology> {
        if !res.is_complete() {
            return Err(AlgebraError::ResolutionTooShort { needed: res.length() + 1, have: res.length() });
        }
        Ok(LocalCohomology { module: m.clone(), res })
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn resolution(&self) -> &FreeResolution {
        &self.res
    }

    pub fn nfiber(&self) -> usize {
        self.module.ctx().nfiber()
    }

    pub fn slice(&self, nu: i64) -> SliceComplex {
        dual_slice_complex(&self.res, nu)
    }

    pub fn is_zero(&self, i: usize, nu: i64, budget: &Budget) -> Result<bool> {
        if i > self.nfiber() {
            return Ok(true);
        }
        self.slice(nu).local_cohomology_is_zero(i, budget)
    }

    /// `dim_k H^i_{S_+}(M)_ν`; field base only.
    pub fn dim(&self, i: usize, nu: i64) -> Result<usize> {
        if i > self.nfiber() {
            return Ok(0);
        }
        self.slice(nu).local_cohomology_dim(i)
    }

    /// `H^i_{S_+}(M)_ν` presented over the base ring.
    pub fn presentation(&self, i: usize, nu: i64, budget: &Budget) -> Result<Module> {
        if i > self.nfiber() {
            return Ok(Module::free(&self.module.ctx().base_context(), Vec::new()));
        }
        self.slice(nu).local_cohomology(i, budget)
    }

    /// Above this degree `H^i_{S_+}(M)` vanishes: the dual slice term `D_{n-i}` is zero there.
    pub fn upper_bound(&self, i: usize) -> ExtInt {
        let n = self.nfiber();
        if i > n {
            return ExtInt::NegInf;
        }
        match self.res.twists(n - i).iter().map(|t| t.fiber as i64).max() {
            Some(t) => ExtInt::Finite(t - n as i64),
            None => ExtInt::NegInf,
        }
    }

    /// `Ext^k_P(M, P)` presented over `P`.
    pub fn ext(&self, k: usize, budget: &Budget) -> Result<Module> {
        let ctx = RingContext::polynomial(self.module.ctx().ring().clone());
        if self.res.free(k).is_none() {
            return Ok(Module::free(&ctx, Vec::new()));
        }
        ext_to_ring(&self.res, k, budget)?.presentation(&ctx, budget)
    }
}

/// How the scan for `a^i` was bounded below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AInvariantBound {
    /// `F_{n-i} = 0`, so `H^i_{S_+}(M) = 0`.
    EmptyTerm,
    /// `H^0_{S_+}(M) ⊆ M` vanishes below the least generator degree.
    GeneratorFloor(ExtInt),
    /// Field base: `H^i_{S_+}(M)_ν` is dual to `Ext^{n-i}_P(M, P)_{-ν-n}`.
    LocalDuality { ext_initial_degree: ExtInt },
    /// `Ext^k_P(M, P) = 0` in fiber degree `-ν-n` for `k ∈ [n-i, n-i+m]` whenever `ν < floor`.
    ExtVanishing { floor: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInvariant {
    pub value: ExtInt,
    pub bound: AInvariantBound,
    /// Slices examined, from the top down.
    pub scanned: Vec<i64>,
}

/// `a^i_{S_+}(M) = sup{ν : H^i_{S_+}(M)_ν ≠ 0}`.
pub fn a_invariant(m: &Module, i: usize, budget: &Budget) -> Result<AInvariant> {
    let lc = LocalCohomology::new(m, budget)?;
    a_invariant_with(&lc, i, budget)
}

pub fn a_invariant_with(lc: &LocalCohomology, i: usize, budget: &Budget) -> Result<AInvariant> {
    let n = lc.nfiber();
    let top = match lc.upper_bound(i) {
        ExtInt::Finite(t) => t,
        _ => return Ok(AInvariant { value: ExtInt::NegInf, bound: AInvariantBound::EmptyTerm, scanned: Vec::new() }),
    };
    let m = lc.module();
    let (floor, bound) = if i == 0 {
        let min = m.pruned().twists().iter().map(|t| t.fiber as i64).min();
        match min {
            Some(lo) => (lo, AInvariantBound::GeneratorFloor(ExtInt::Finite(lo))),
            None => return Ok(AInvariant { value: ExtInt::NegInf, bound: AInvariantBound::GeneratorFloor(ExtInt::PosInf), scanned: Vec::new() }),
        }
    } else if m.ctx().is_field_base() {
        let e = lc.ext(n - i, budget)?;
        let indeg = FiberSupport::of(&e, budget)?.min_degree();
        let bound = AInvariantBound::LocalDuality { ext_initial_degree: indeg };
        match indeg {
            ExtInt::Finite(d) => (-(n as i64) - d, bound),
            _ => return Ok(AInvariant { value: ExtInt::NegInf, bound, scanned: Vec::new() }),
        }
    } else {
        let nb = m.ctx().nbase();
        let mut worst = ExtInt::NegInf;
        for k in (n - i)..=(n - i + nb) {
            let e = lc.ext(k, budget)?;
            worst = worst.max(FiberSupport::of(&e, budget)?.max_degree());
        }
        match worst {
            ExtInt::PosInf => {
                return scan_unbounded(lc, i, top, budget);
            }
            ExtInt::NegInf => {
                return Ok(AInvariant {
                    value: ExtInt::NegInf,
                    bound: AInvariantBound::ExtVanishing { floor: top + 1 },
                    scanned: Vec::new(),
                })
            }
            ExtInt::Finite(d) => {
                let floor = -(n as i64) - d;
                (floor, AInvariantBound::ExtVanishing { floor })
            }
        }
    };
    let mut scanned = Vec::new();
    let mut nu = top;
    while nu >= floor {
        budget.charge(1)?;
        scanned.push(nu);
        if !lc.is_zero(i, nu, budget)? {
            if let AInvariantBound::LocalDuality { .. } = bound {
                if nu != floor {
                    return Err(AlgebraError::Tripwire(format!(
                        "a^{i}: slice scan found degree {nu}, local duality predicts {floor}"
                    )));
                }
            }
            return Ok(AInvariant { value: ExtInt::Finite(nu), bound, scanned });
        }
        nu -= 1;
    }
    if let AInvariantBound::LocalDuality { .. } = bound {
        return Err(AlgebraError::Tripwire(format!("a^{i}: local duality predicts {floor}, slice is zero")));
    }
    Ok(AInvariant { value: ExtInt::NegInf, bound, scanned })
}

/// Without a vanishing certificate the value is still exact once a nonzero slice is found.
fn scan_unbounded(lc: &LocalCohomology, i: usize, top: i64, budget: &Budget) -> Result<AInvariant> {
    const SPAN: i64 = 64;
    let mut scanned = Vec::new();
    for nu in (top - SPAN..=top).rev() {
        budget.charge(1)?;
        scanned.push(nu);
        if !lc.is_zero(i, nu, budget)? {
            return Ok(AInvariant { value: ExtInt::Finite(nu), bound: AInvariantBound::ExtVanishing { floor: nu }, scanned });
        }
    }
    Err(AlgebraError::OutOfScope(format!(
        "a^{i}: no nonzero slice in [{}, {top}] and no vanishing certificate below",
        top - SPAN
    )))
}

/// `H^0_{S_+}(M) = (0 :_M S_+^∞)` as a submodule of `M`.
pub fn h0_s_plus(m: &Module, budget: &Budget) -> Result<Subquotient> {
    let x = fiber_variables(m.ctx().ring());
    let gens = saturation(m, &x, budget)?;
    Ok(Subquotient::of_module(m, gens))
}

/// `end(H^0_{S_+}(M))` read from the saturation; a second route to `a^0`.
pub fn a0_by_saturation(m: &Module, budget: &Budget) -> Result<ExtInt> {
    let h = h0_s_plus(m, budget)?;
    let p = h.presentation(m.ctx(), budget)?;
    Ok(FiberSupport::of(&p, budget)?.max_degree())
}

/// `depth_{S_+}(M)`: the first index with `H^i(x; M) ≠ 0`, `+∞` for `M = 0`.
pub fn depth_s_plus(m: &Module, budget: &Budget) -> Result<ExtInt> {
    let x = fiber_variables(m.ctx().ring());
    let k = KoszulComplex::new(&x, m, KoszulKind::Cohomological)?;
    for p in 0..=k.len() {
        if !k.homology_is_zero(p, budget)? {
            return Ok(ExtInt::Finite(p as i64));
        }
    }
    Ok(ExtInt::PosInf)
}
