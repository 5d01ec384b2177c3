//! Asymptotic behaviour of the slices `M_μ` and of the components of `H^i_{S_+}(M)`.
//!
//! Each profile is computed on a finite window of fiber degrees and compared against the
//! threshold past which the behaviour is guaranteed to settle. A verdict names the window it
//! looked at; a failure also names the first offending degree.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::budget::Budget;
use crate::error::{AlgebraError, Result};
use crate::extended::ExtInt;
use crate::ideal::Ideal;
use crate::invariants::ass::{ass_primes, h0_support_dim, is_multigraded, localize_monomial, PrimeIdeal};
use crate::invariants::cd::{cd_wrt, CdValue};
use crate::invariants::depth::depth_wrt;
use crate::invariants::local::{a0_by_saturation, depth_s_plus, h0_s_plus, LocalCohomology};
use crate::invariants::regularity::{regularity, regularity_with};
use crate::module::{saturation, Module, Subquotient};
use crate::poly::Poly;
use crate::ring::Bidegree;
use crate::slices::graded_slice;
use crate::support::{for_each_monomial, FiberSupport};

/// Consecutive equal values needed past a candidate point before calling it a stabilization.
pub const CONFIRM_SPAN: i64 = 5;
/// Degrees past a threshold that a window must cover for a constancy claim.
pub const STABLE_SPAN: i64 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Window> {
        if lo > hi {
            return Err(AlgebraError::InvalidInput(format!("empty window {lo}..{hi}")));
        }
        Ok(Window { lo, hi })
    }

    pub fn degrees(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn contains(self, t: i64) -> bool {
        self.lo <= t && t <= self.hi
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TameStatement {
    /// `dim = d` persists to the next lower degree.
    TopPersists,
    /// `dim = d` holds in a degree iff it holds in the next lower one.
    TopEquivalent,
    /// `dim ≥ d-1` persists.
    SubTopPersists,
    SubTopEquivalent,
    /// `dim ≥ d-2` persists.
    SecondPersists,
}

impl TameStatement {
    pub const ALL: [TameStatement; 5] = [
        TameStatement::TopPersists,
        TameStatement::TopEquivalent,
        TameStatement::SubTopPersists,
        TameStatement::SubTopEquivalent,
        TameStatement::SecondPersists,
    ];

    /// How far below `dim R` the statement looks.
    pub fn codim(self) -> usize {
        match self {
            TameStatement::TopPersists | TameStatement::TopEquivalent => 0,
            TameStatement::SubTopPersists | TameStatement::SubTopEquivalent => 1,
            TameStatement::SecondPersists => 2,
        }
    }

    pub fn is_equivalence(self) -> bool {
        matches!(self, TameStatement::TopEquivalent | TameStatement::SubTopEquivalent)
    }

    pub fn tag(self) -> &'static str {
        match self {
            TameStatement::TopPersists => "top-dim-persists",
            TameStatement::TopEquivalent => "top-dim-equivalent",
            TameStatement::SubTopPersists => "subtop-dim-persists",
            TameStatement::SubTopEquivalent => "subtop-dim-equivalent",
            TameStatement::SecondPersists => "second-dim-persists",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    /// `depth_I(M_μ)` is constant from `μ_0` on.
    DepthStability,
    /// `depth_I(M_μ) ≥ d` wherever `H^q_{S_+}(M)_μ = 0` for all `q < d`.
    DepthLowerBound,
    /// `cd_I(M_μ)` is nondecreasing past `a^0`.
    CdMonotone,
    /// `cd_I(M_μ)` is constant from `reg + n - depth_{S_+}` on.
    CdConstant,
    /// `Ass(M_ν) ⊆ Ass(M_μ)` for `μ ≥ ν` when `H^0_{S_+}(M)_ν = 0`.
    AssMonotone,
    /// A tail of the window on which `Ass(M_μ)` is constant.
    AssStabilization,
    /// `∪_μ Ass(M_μ)` equals the contractions of `Ass_S(M)`.
    AssUnion,
    /// `M_μ ≠ 0 ⇒ M_{μ+1} ≠ 0` past `a^0`.
    Nonvanishing,
    /// `M_μ ≠ 0 ⇔ M_{μ+1} ≠ 0` past `reg`.
    NonvanishingEquivalence,
    /// Localized lengths are nondecreasing past `j(M)`.
    LengthMonotone,
    /// The vanishing pattern of `H^i_{S_+}(M)_γ` is constant for `γ < γ_0`.
    Tameness,
    TameImplication(TameStatement),
}

impl Check {
    pub fn tag(self) -> &'static str {
        match self {
            Check::DepthStability => "depth-stability",
            Check::DepthLowerBound => "depth-lower-bound",
            Check::CdMonotone => "cd-monotone",
            Check::CdConstant => "cd-constant",
            Check::AssMonotone => "ass-monotone",
            Check::AssStabilization => "ass-stabilization",
            Check::AssUnion => "ass-union",
            Check::Nonvanishing => "nonvanishing",
            Check::NonvanishingEquivalence => "nonvanishing-equivalence",
            Check::LengthMonotone => "length-monotone",
            Check::Tameness => "tameness",
            Check::TameImplication(s) => s.tag(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail { degree: i64 },
    /// The window or the exactness regime is too weak to decide.
    Inconclusive,
    /// The hypotheses of the statement do not hold for this input.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub check: Check,
    pub outcome: Outcome,
    pub window: Window,
    pub detail: String,
}

impl Verdict {
    fn new(check: Check, outcome: Outcome, window: Window, detail: impl Into<String>) -> Verdict {
        Verdict { check, outcome, window, detail: detail.into() }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn failed(&self) -> bool {
        matches!(self.outcome, Outcome::Fail { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match &self.outcome {
            Outcome::Pass => "pass".to_string(),
            Outcome::Fail { degree } => format!("FAIL at {degree}"),
            Outcome::Inconclusive => "inconclusive".to_string(),
            Outcome::NotApplicable => "n/a".to_string(),
        };
        write!(f, "{} [{}]: {}", self.check.tag(), self.window, o)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

/// `a - b` with `reg(0) - depth(0) = -∞`.
fn ext_sub(a: ExtInt, b: ExtInt) -> ExtInt {
    match (a, b) {
        (ExtInt::Finite(x), ExtInt::Finite(y)) => ExtInt::Finite(x - y),
        (ExtInt::NegInf, _) | (_, ExtInt::PosInf) => ExtInt::NegInf,
        _ => ExtInt::PosInf,
    }
}

fn above(t: i64, bound: ExtInt) -> bool {
    ExtInt::Finite(t) > bound
}

fn mask_set(primes: &BTreeSet<PrimeIdeal>) -> Result<BTreeSet<u64>> {
    primes
        .iter()
        .map(|p| p.var_mask().ok_or_else(|| AlgebraError::OutOfScope("non-monomial associated prime".into())))
        .collect()
}

pub fn format_primes(names: &[String], masks: &BTreeSet<u64>) -> String {
    let one = |m: u64| -> String {
        let v: Vec<&str> = (0..names.len()).filter(|&i| m >> i & 1 == 1).map(|i| names[i].as_str()).collect();
        if v.is_empty() {
            "(0)".into()
        } else {
            format!("({})", v.join(","))
        }
    };
    let mut sorted: Vec<u64> = masks.iter().copied().collect();
    sorted.sort_by_key(|&m| (m.count_ones(), (0..64).filter(|i| m >> i & 1 == 1).collect::<Vec<u32>>()));
    format!("{{{}}}", sorted.into_iter().map(one).collect::<Vec<_>>().join(", "))
}

/// Number of standard monomials of a finite length module; `OutOfScope` when some component
/// has standard monomials in every degree up to the search limit.
pub fn finite_length(m: &Module, budget: &Budget) -> Result<usize> {
    const LIMIT: u16 = 512;
    let gb = m.relation_gb(budget)?;
    let nv = m.ctx().ring().nvars();
    let mut total = 0usize;
    for j in 0..m.rank() {
        if gb.contains_unit(j) {
            continue;
        }
        let mut d = 0u16;
        loop {
            budget.charge(1)?;
            let mut count = 0usize;
            // Standard monomials form an order ideal, so an empty degree ends the count.
            for_each_monomial(nv, d, &mut |u| {
                if !gb.is_lead_multiple(j, u) {
                    count += 1;
                }
            });
            if count == 0 || nv == 0 {
                total += count;
                break;
            }
            total += count;
            d += 1;
            if d > LIMIT {
                return Err(AlgebraError::OutOfScope("module is not of finite length".into()));
            }
        }
    }
    Ok(total)
}

/// Base polynomials from generators given over the base ring or over the ambient ring.
fn to_base(m: &Module, gens: &[Poly]) -> Result<Vec<Poly>> {
    let ring = m.ctx().ring();
    let base = m.ctx().base_context();
    let bring = base.ring().clone();
    let nb = ring.nbase();
    gens.iter()
        .map(|g| {
            if g.ring() == &bring {
                return Ok(g.clone());
            }
            if g.ring() != ring {
                return Err(AlgebraError::InvalidInput("ideal lives in an unrelated ring".into()));
            }
            let mut terms = Vec::new();
            for (mon, c) in g.terms() {
                if mon.exps()[nb..].iter().any(|&e| e != 0) {
                    return Err(AlgebraError::InvalidInput(format!("ideal generator {g} involves fiber variables")));
                }
                terms.push((mon.slice(ring.base_range()), c.clone()));
            }
            Ok(Poly::from_terms(&bring, terms))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct DepthProfile {
    pub window: Window,
    pub values: Vec<(i64, ExtInt)>,
    /// `reg - depth_{S_+}`.
    pub r: ExtInt,
    /// `min_{ν > r} depth_I(M_ν)` over the examined degrees.
    pub d: Option<ExtInt>,
    pub mu0: Option<i64>,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug)]
pub struct CdProfile {
    pub window: Window,
    pub values: Vec<(i64, CdValue)>,
    pub a0: ExtInt,
    /// `reg + n - depth_{S_+}`; `None` when `n = 0`.
    pub bound: Option<ExtInt>,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug)]
pub struct AssProfile {
    pub window: Window,
    /// Associated primes of each slice, as masks of base variables.
    pub values: Vec<(i64, BTreeSet<u64>)>,
    /// First degree of the constant tail, if one of length `CONFIRM_SPAN + 1` was seen.
    pub stable_from: Option<i64>,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug)]
pub struct AssUnion {
    pub window: Window,
    pub slices: BTreeSet<u64>,
    pub contracted: BTreeSet<u64>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct LengthProfile {
    pub window: Window,
    pub prime: u64,
    pub values: Vec<(i64, usize)>,
    /// `j(M)`, or `a^0` standing in for it outside the multigraded regime.
    pub j: ExtInt,
    pub j_exact: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct TamenessScan {
    pub i: usize,
    pub window: Window,
    /// Whether `H^i_{S_+}(M)_γ ≠ 0`.
    pub pattern: Vec<(i64, bool)>,
    pub gamma0: Option<i64>,
    pub verdict: Verdict,
}

/// Thresholds past which the `dim H^i_{S_+}(M)_{-γ}` statements hold. `None` marks an entry
/// outside the computable scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameThresholds {
    pub i: usize,
    pub a: Option<ExtInt>,
    pub b: Option<ExtInt>,
    pub c: Option<ExtInt>,
    pub d: Option<ExtInt>,
    pub e: Option<ExtInt>,
}

impl TameThresholds {
    pub fn for_statement(&self, s: TameStatement) -> Option<ExtInt> {
        match s {
            TameStatement::TopPersists => self.a,
            TameStatement::TopEquivalent => self.b,
            TameStatement::SubTopPersists => self.c,
            TameStatement::SubTopEquivalent => self.d,
            TameStatement::SecondPersists => self.e,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Thresholds {
    pub reg: ExtInt,
    pub a0: ExtInt,
    pub depth_s_plus: ExtInt,
    pub r: ExtInt,
    pub cd_bound: Option<ExtInt>,
    pub depth: Option<(ExtInt, Option<i64>)>,
    /// Empty with a reason when the base is not a polynomial ring.
    pub tame: Vec<TameThresholds>,
    pub tame_scope: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct StabilityReport {
    pub depth: Option<DepthProfile>,
    pub cd: Option<CdProfile>,
    pub ass: Option<AssProfile>,
    pub ass_union: Option<AssUnion>,
    pub nonvanishing: Vec<Verdict>,
}

impl StabilityReport {
    pub fn verdicts(&self) -> Vec<&Verdict> {
        let mut out: Vec<&Verdict> = Vec::new();
        if let Some(p) = &self.depth {
            out.extend(&p.verdicts);
        }
        if let Some(p) = &self.cd {
            out.extend(&p.verdicts);
        }
        if let Some(p) = &self.ass {
            out.extend(&p.verdicts);
        }
        if let Some(u) = &self.ass_union {
            out.push(&u.verdict);
        }
        out.extend(&self.nonvanishing);
        out
    }

    pub fn any_failed(&self) -> bool {
        self.verdicts().iter().any(|v| v.failed())
    }
}

/// The numerical data shared by every profile of one module, with a cache of slices.
pub struct Stability {
    module: Module,
    lc: LocalCohomology,
    pub reg: ExtInt,
    pub a0: ExtInt,
    pub depth_s_plus: ExtInt,
    pub n: usize,
    support: FiberSupport,
    h0: FiberSupport,
    slices: RefCell<BTreeMap<i64, Module>>,
    ext: RefCell<BTreeMap<usize, Module>>,
}

impl Stability {
    pub fn new(m: &Module, budget: &Budget) -> Result<Stability> {
        m.check_bigraded()?;
        let lc = LocalCohomology::new(m, budget)?;
        let reg = regularity_with(m, lc.resolution(), budget)?.value;
        let a0 = a0_by_saturation(m, budget)?;
        let depth = depth_s_plus(m, budget)?;
        let h0 = FiberSupport::of(&h0_s_plus(m, budget)?.presentation(m.ctx(), budget)?, budget)?;
        let support = FiberSupport::of(m, budget)?;
        Ok(Stability {
            module: m.clone(),
            lc,
            reg,
            a0,
            depth_s_plus: depth,
            n: m.ctx().nfiber(),
            support,
            h0,
            slices: RefCell::new(BTreeMap::new()),
            ext: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn local_cohomology(&self) -> &LocalCohomology {
        &self.lc
    }

    /// `reg - depth_{S_+}`.
    pub fn r(&self) -> ExtInt {
        ext_sub(self.reg, self.depth_s_plus)
    }

    /// `reg + n - depth_{S_+}`, the constancy threshold for `cd`; `None` when `n = 0`.
    pub fn cd_bound(&self) -> Option<ExtInt> {
        (self.n > 0).then(|| ext_sub(self.reg.add(self.n as i64), self.depth_s_plus))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.support.min_degree().finite()
    }

    pub fn is_nonzero_at(&self, mu: i64) -> bool {
        self.support.is_nonzero_at(mu)
    }

    /// `[a^0 - 2, max(bound, r, a^0, least generator degree) + 15]`.
    pub fn default_window(&self) -> Window {
        let Some(min) = self.min_degree() else { return Window { lo: 0, hi: STABLE_SPAN } };
        let lo = self.a0.finite().unwrap_or(min) - 2;
        let mut top = min.max(lo);
        for t in [self.cd_bound().unwrap_or(self.reg), self.r(), self.a0, self.reg] {
            if let Some(t) = t.finite() {
                top = top.max(t);
            }
        }
        Window { lo, hi: top + STABLE_SPAN }
    }

    /// `[-|reg| - 2n - 10, reg + n + 10]` in the degrees `γ` of `H^i_{S_+}(M)_γ`.
    pub fn default_tame_window(&self) -> Window {
        let reg = self.reg.finite().unwrap_or(0);
        let n = self.n as i64;
        Window { lo: -reg.abs() - 2 * n - 10, hi: reg + n + 10 }
    }

    /// `M_μ` over the base ring, pruned.
    pub fn slice(&self, mu: i64) -> Result<Module> {
        if let Some(s) = self.slices.borrow().get(&mu) {
            return Ok(s.clone());
        }
        let s = graded_slice(&self.module, mu)?.module.pruned();
        self.slices.borrow_mut().insert(mu, s.clone());
        Ok(s)
    }

    pub fn depth_profile(&self, ideal: &[Poly], window: Option<Window>, budget: &Budget) -> Result<DepthProfile> {
        let gens = to_base(&self.module, ideal)?;
        let auto = window.is_none();
        let mut w = window.unwrap_or_else(|| self.default_window());
        let r = self.r();
        let mut values: BTreeMap<i64, ExtInt> = BTreeMap::new();
        let (d, mu0) = loop {
            for mu in w.degrees() {
                if let std::collections::btree_map::Entry::Vacant(e) = values.entry(mu) {
                    budget.charge(1)?;
                    e.insert(depth_wrt(&gens, &self.slice(mu)?, budget)?.value);
                }
            }
            let past: Vec<(i64, ExtInt)> = values.iter().filter(|(&mu, _)| above(mu, r)).map(|(&a, &b)| (a, b)).collect();
            let Some(d) = past.iter().map(|p| p.1).min() else {
                if auto {
                    w.hi += STABLE_SPAN;
                    continue;
                }
                break (None, None);
            };
            let mu0 = past.iter().find(|p| p.1 == d).map(|p| p.0);
            match mu0 {
                Some(m0) if auto && w.hi < m0 + STABLE_SPAN => w.hi = m0 + STABLE_SPAN,
                _ => break (Some(d), mu0),
            }
        };
        let values: Vec<(i64, ExtInt)> = values.into_iter().collect();
        let mut verdicts = Vec::new();
        let v = match (d, mu0) {
            (Some(d), Some(m0)) => {
                let bad = values.iter().find(|(mu, v)| *mu >= m0 && *v != d);
                if let Some((mu, v)) = bad {
                    Verdict::new(Check::DepthStability, Outcome::Fail { degree: *mu }, w, format!("depth {v} after reaching d = {d} at {m0}"))
                } else if w.hi < m0 + STABLE_SPAN {
                    Verdict::new(Check::DepthStability, Outcome::Inconclusive, w, format!("window ends before mu0 + {STABLE_SPAN} = {}", m0 + STABLE_SPAN))
                } else {
                    Verdict::new(Check::DepthStability, Outcome::Pass, w, format!("constant {d} on [{m0}, {}]", w.hi))
                }
            }
            _ => Verdict::new(Check::DepthStability, Outcome::Inconclusive, w, format!("no degree above r = {r} in the window")),
        };
        verdicts.push(v);
        if let Some(ExtInt::Finite(d)) = d {
            verdicts.push(self.depth_lower_bound(&values, d, w, budget)?);
        }
        Ok(DepthProfile { window: w, values, r, d, mu0, verdicts })
    }

    fn depth_lower_bound(&self, values: &[(i64, ExtInt)], d: i64, w: Window, budget: &Budget) -> Result<Verdict> {
        let mut checked = 0;
        for &(mu, v) in values {
            let mut vanish = true;
            for q in 0..(d as usize).min(self.n + 1) {
                if !self.lc.is_zero(q, mu, budget)? {
                    vanish = false;
                    break;
                }
            }
            if !vanish {
                continue;
            }
            checked += 1;
            if v < ExtInt::Finite(d) {
                return Ok(Verdict::new(Check::DepthLowerBound, Outcome::Fail { degree: mu }, w, format!("depth {v} < {d} with lower cohomology vanishing")));
            }
        }
        Ok(Verdict::new(Check::DepthLowerBound, Outcome::Pass, w, format!("{checked} degrees with vanishing lower cohomology")))
    }

    pub fn cd_profile(&self, ideal: &[Poly], window: Option<Window>, budget: &Budget) -> Result<CdProfile> {
        let gens = to_base(&self.module, ideal)?;
        let mut w = window.unwrap_or_else(|| self.default_window());
        let bound = self.cd_bound();
        if window.is_none() {
            if let Some(ExtInt::Finite(b)) = bound {
                w.hi = w.hi.max(b + STABLE_SPAN);
            }
        }
        let mut values = Vec::new();
        for mu in w.degrees() {
            budget.charge(1)?;
            values.push((mu, cd_wrt(&gens, &self.slice(mu)?, budget)?.cd));
        }
        let mut verdicts = Vec::new();
        // Nondecreasing past a^0; interval values can only refute.
        let mut inexact = false;
        let mut fail = None;
        for pair in values.windows(2) {
            let ((mu, x), (nu, y)) = (&pair[0], &pair[1]);
            if !above(*mu, self.a0) {
                continue;
            }
            match (x.exact(), y.exact()) {
                (Some(a), Some(b)) if a > b => {
                    fail = Some((*nu, format!("cd drops from {a} to {b}")));
                    break;
                }
                (Some(_), Some(_)) => {}
                _ => {
                    if x.lo() > y.hi() {
                        fail = Some((*nu, format!("cd bounds {x} then {y}")));
                        break;
                    }
                    inexact = true;
                }
            }
        }
        verdicts.push(match fail {
            Some((deg, why)) => Verdict::new(Check::CdMonotone, Outcome::Fail { degree: deg }, w, why),
            None if inexact => Verdict::new(Check::CdMonotone, Outcome::Inconclusive, w, "some slice has only interval bounds"),
            None => Verdict::new(Check::CdMonotone, Outcome::Pass, w, format!("nondecreasing past a0 = {}", self.a0)),
        });
        verdicts.push(match bound {
            None => Verdict::new(Check::CdConstant, Outcome::NotApplicable, w, "no fiber variables"),
            Some(b) => {
                let from = b.finite().unwrap_or(w.lo).max(w.lo);
                let tail: Vec<&(i64, CdValue)> = values.iter().filter(|(mu, _)| *mu >= from).collect();
                let first = tail.first().map(|t| &t.1);
                let mut out = None;
                for (mu, v) in &tail {
                    let same = match (v.exact(), first.and_then(|f| f.exact())) {
                        (Some(a), Some(b)) => Some(a == b),
                        _ => None,
                    };
                    match same {
                        Some(false) => {
                            out = Some(Verdict::new(Check::CdConstant, Outcome::Fail { degree: *mu }, w, format!("cd {v} differs from {} at {from}", first.expect("tail"))));
                            break;
                        }
                        None => {
                            out = Some(Verdict::new(Check::CdConstant, Outcome::Inconclusive, w, format!("interval value {v} at {mu}")));
                        }
                        Some(true) => {}
                    }
                }
                out.unwrap_or_else(|| {
                    if w.hi < from + STABLE_SPAN {
                        Verdict::new(Check::CdConstant, Outcome::Inconclusive, w, format!("window ends before {}", from + STABLE_SPAN))
                    } else {
                        Verdict::new(Check::CdConstant, Outcome::Pass, w, format!("constant from {b}"))
                    }
                })
            }
        });
        Ok(CdProfile { window: w, values, a0: self.a0, bound, verdicts })
    }

    /// `Ass_R(M_μ)` as masks of base variables; exact for multigraded modules.
    pub fn slice_ass(&self, mu: i64, budget: &Budget) -> Result<BTreeSet<u64>> {
        let s = self.slice(mu)?;
        mask_set(&ass_primes(&s, budget)?.primes)
    }

    pub fn ass_profile(&self, window: Option<Window>, budget: &Budget) -> Result<AssProfile> {
        let w = window.unwrap_or_else(|| self.default_window());
        let mut values = Vec::new();
        for mu in w.degrees() {
            budget.charge(1)?;
            values.push((mu, self.slice_ass(mu, budget)?));
        }
        let mut verdicts = Vec::new();
        let mut fail = None;
        let mut sources = 0;
        'outer: for (k, (nu, a)) in values.iter().enumerate() {
            if self.h0.is_nonzero_at(*nu) {
                continue;
            }
            sources += 1;
            for (mu, b) in &values[k + 1..] {
                if !a.is_subset(b) {
                    fail = Some(Verdict::new(Check::AssMonotone, Outcome::Fail { degree: *mu }, w, format!("Ass at {nu} not contained in Ass at {mu}")));
                    break 'outer;
                }
            }
        }
        verdicts.push(fail.unwrap_or_else(|| Verdict::new(Check::AssMonotone, Outcome::Pass, w, format!("{sources} degrees with H0 vanishing"))));
        let mut start = values.len();
        while start > 0 && values[start - 1].1 == values[values.len() - 1].1 {
            start -= 1;
        }
        let run = (values.len() - start) as i64;
        let stable_from = (run > CONFIRM_SPAN).then(|| values[start].0);
        verdicts.push(match stable_from {
            Some(s) => Verdict::new(Check::AssStabilization, Outcome::Pass, w, format!("constant from {s}")),
            None => Verdict::new(Check::AssStabilization, Outcome::Inconclusive, w, format!("final run of {run} degrees is shorter than {}", CONFIRM_SPAN + 1)),
        });
        Ok(AssProfile { window: w, values, stable_from, verdicts })
    }

    /// Contractions to the base of the associated primes of `M`.
    pub fn contracted_ass(&self, budget: &Budget) -> Result<BTreeSet<u64>> {
        let base_bits = (1u64 << self.module.ctx().ring().nbase()) - 1;
        Ok(mask_set(&ass_primes(&self.module, budget)?.primes)?.into_iter().map(|m| m & base_bits).collect())
    }

    /// The union over a window starting at the least generator degree; a strict inclusion is
    /// inconclusive, since the missing primes may appear further up.
    pub fn ass_union_check(&self, window: Option<Window>, budget: &Budget) -> Result<AssUnion> {
        let w = window.unwrap_or_else(|| {
            let d = self.default_window();
            Window { lo: self.min_degree().unwrap_or(d.lo).min(d.lo), hi: d.hi }
        });
        let contracted = self.contracted_ass(budget)?;
        let mut slices = BTreeSet::new();
        for mu in w.degrees() {
            budget.charge(1)?;
            slices.extend(self.slice_ass(mu, budget)?);
        }
        let names = self.module.ctx().ring().names()[..self.module.ctx().nbase()].to_vec();
        let verdict = if !slices.is_subset(&contracted) {
            let extra: BTreeSet<u64> = slices.difference(&contracted).copied().collect();
            let deg = w.degrees().find(|&mu| self.slice_ass(mu, budget).is_ok_and(|a| !a.is_disjoint(&extra))).unwrap_or(w.lo);
            Verdict::new(Check::AssUnion, Outcome::Fail { degree: deg }, w, format!("slice primes {} outside the contractions", format_primes(&names, &extra)))
        } else if slices != contracted {
            let missing: BTreeSet<u64> = contracted.difference(&slices).copied().collect();
            Verdict::new(Check::AssUnion, Outcome::Inconclusive, w, format!("{} not seen in the window", format_primes(&names, &missing)))
        } else if self.min_degree().is_some_and(|m| m < w.lo) {
            Verdict::new(Check::AssUnion, Outcome::Inconclusive, w, "window starts above the least generator degree")
        } else {
            Verdict::new(Check::AssUnion, Outcome::Pass, w, format_primes(&names, &slices))
        };
        Ok(AssUnion { window: w, slices, contracted, verdict })
    }

    /// Persistence of `M_μ ≠ 0` past `a^0`, and its converse past `reg`.
    pub fn nonvanishing(&self, window: Option<Window>) -> Vec<Verdict> {
        let w = window.unwrap_or_else(|| self.default_window());
        let mut persist = Verdict::new(Check::Nonvanishing, Outcome::Pass, w, format!("past a0 = {}", self.a0));
        let mut equiv = Verdict::new(Check::NonvanishingEquivalence, Outcome::Pass, w, format!("past reg = {}", self.reg));
        for mu in w.lo..w.hi {
            let (here, next) = (self.is_nonzero_at(mu), self.is_nonzero_at(mu + 1));
            if above(mu, self.a0) && here && !next && persist.passed() {
                persist.outcome = Outcome::Fail { degree: mu + 1 };
            }
            if above(mu, self.reg) && here != next && equiv.passed() {
                equiv.outcome = Outcome::Fail { degree: mu + 1 };
            }
        }
        vec![persist, equiv]
    }

    pub fn report(&self, ideal: Option<&[Poly]>, window: Option<Window>, budget: &Budget) -> Result<StabilityReport> {
        let mut rep = StabilityReport::default();
        if let Some(i) = ideal {
            rep.depth = Some(self.depth_profile(i, window, budget)?);
            rep.cd = Some(self.cd_profile(i, window, budget)?);
        }
        if is_multigraded(&self.module) {
            rep.ass = Some(self.ass_profile(window, budget)?);
            rep.ass_union = Some(self.ass_union_check(window, budget)?);
        }
        rep.nonvanishing = self.nonvanishing(window);
        Ok(rep)
    }

    /// `j(M) = max_p end H^0_{S_+}(H^0_p(M_p))` over the contracted associated primes; `a^0`
    /// as a bound when `M` is not multigraded.
    pub fn j_invariant(&self, budget: &Budget) -> Result<(ExtInt, bool)> {
        if !is_multigraded(&self.module) {
            return Ok((self.a0, false));
        }
        let ring = self.module.ctx().ring();
        let nb = ring.nbase();
        let fiber_bits = ((1u64 << ring.nvars()) - 1) & !((1u64 << nb) - 1);
        let mut j = ExtInt::NegInf;
        for q in self.contracted_ass(budget)? {
            budget.charge(1)?;
            let loc = localize_monomial(&self.module, &PrimeIdeal::monomial(ring, q | fiber_bits))?;
            let lm = &loc.module;
            let kept_base = q.count_ones() as usize;
            let torsion = if kept_base == 0 {
                lm.clone()
            } else {
                let ys: Vec<Poly> = (0..kept_base).map(|i| Poly::var(lm.ctx().ring(), i)).collect();
                let gens = saturation(lm, &ys, budget)?;
                Subquotient::of_module(lm, gens).presentation(lm.ctx(), budget)?
            };
            j = j.max(a0_by_saturation(&torsion, budget)?);
        }
        Ok((j, true))
    }

    /// `ℓ(H^0_p(M_μ ⊗ R_p))` for a monomial prime `p` of the base, given as a variable mask.
    pub fn localized_length(&self, p: u64, mu: i64, budget: &Budget) -> Result<usize> {
        let s = self.slice(mu)?;
        if s.rank() == 0 {
            return Ok(0);
        }
        let loc = localize_monomial(&s, &PrimeIdeal::monomial(s.ctx().ring(), p))?;
        let lm = &loc.module;
        let vars: Vec<Poly> = (0..lm.ctx().ring().nvars()).map(|i| Poly::var(lm.ctx().ring(), i)).collect();
        let torsion = if vars.is_empty() {
            lm.clone()
        } else {
            let gens = saturation(lm, &vars, budget)?;
            Subquotient::of_module(lm, gens).presentation(lm.ctx(), budget)?
        };
        finite_length(&torsion, budget)
    }

    pub fn length_profile(&self, p: u64, window: Option<Window>, budget: &Budget) -> Result<LengthProfile> {
        let nb = self.module.ctx().nbase();
        if p >> nb != 0 {
            return Err(AlgebraError::InvalidInput("prime must be generated by base variables".into()));
        }
        if !is_multigraded(&self.module) {
            return Err(AlgebraError::OutOfScope("localized lengths need a multigraded module".into()));
        }
        let w = window.unwrap_or_else(|| self.default_window());
        let (j, j_exact) = self.j_invariant(budget)?;
        let mut values = Vec::new();
        for mu in w.degrees() {
            budget.charge(1)?;
            values.push((mu, self.localized_length(p, mu, budget)?));
        }
        let mut verdict = Verdict::new(Check::LengthMonotone, Outcome::Pass, w, format!("nondecreasing past j = {j}"));
        if j_exact && j > self.a0 {
            verdict = Verdict::new(Check::LengthMonotone, Outcome::Fail { degree: j.finite().unwrap_or(w.lo) }, w, format!("j = {j} exceeds a0 = {}", self.a0));
        } else if let Some(pair) = values.windows(2).find(|p| above(p[0].0, j) && p[0].1 > p[1].1) {
            verdict = Verdict::new(Check::LengthMonotone, Outcome::Fail { degree: pair[1].0 }, w, format!("length drops from {} to {}", pair[0].1, pair[1].1));
        }
        Ok(LengthProfile { window: w, prime: p, values, j, j_exact, verdict })
    }

    /// Krull dimension of the base module `H^i_{S_+}(M)_γ`; `None` when it vanishes.
    pub fn cohomology_dim(&self, i: usize, gamma: i64, budget: &Budget) -> Result<Option<usize>> {
        if self.lc.is_zero(i, gamma, budget)? {
            return Ok(None);
        }
        let p = self.lc.presentation(i, gamma, budget)?;
        Ideal::annihilator_of(&p, budget)?.dimension(budget)
    }

    /// Krull dimension of the base ring.
    pub fn base_dim(&self, budget: &Budget) -> Result<usize> {
        let b = self.module.ctx().base_context();
        if b.base_relations().is_empty() {
            return Ok(b.ring().nvars());
        }
        let j = Ideal::new(b.ring(), b.base_relations().to_vec());
        Ok(j.dimension(budget)?.unwrap_or(0))
    }

    pub fn tameness_scan(&self, i: usize, window: Option<Window>, budget: &Budget) -> Result<TamenessScan> {
        let w = window.unwrap_or_else(|| self.default_tame_window());
        let mut pattern = Vec::new();
        for g in w.degrees() {
            budget.charge(1)?;
            pattern.push((g, !self.lc.is_zero(i, g, budget)?));
        }
        let first = pattern[0].1;
        let g0 = pattern.iter().find(|p| p.1 != first).map(|p| p.0).unwrap_or(w.hi + 1);
        let run = g0 - w.lo;
        let dim = self.base_dim(budget)?;
        let state = if first { "nonzero" } else { "zero" };
        let (gamma0, verdict) = if run < CONFIRM_SPAN {
            (None, Verdict::new(Check::Tameness, Outcome::Inconclusive, w, format!("constant run of {run} below the first change")))
        } else if dim > 2 {
            (Some(g0), Verdict::new(Check::Tameness, Outcome::NotApplicable, w, format!("base of dimension {dim}; {state} below {g0}")))
        } else {
            (Some(g0), Verdict::new(Check::Tameness, Outcome::Pass, w, format!("{state} below {g0}")))
        };
        Ok(TamenessScan { i, window: w, pattern, gamma0, verdict })
    }

    /// `Ext^k_S(M, ω_S)` with `ω_S = S(-n)`: generator degrees move up by `n`.
    fn ext_omega(&self, k: usize, budget: &Budget) -> Result<Module> {
        if let Some(e) = self.ext.borrow().get(&k) {
            return Ok(e.clone());
        }
        let e = self.lc.ext(k, budget)?.shifted(Bidegree::new(-(self.n as i32), 0));
        self.ext.borrow_mut().insert(k, e.clone());
        Ok(e)
    }

    /// `(end H^0_{S_+}(X), reg X)` for `X = H^0_{[d-j]}(Ext^k_S(M, ω_S))`.
    fn tame_pair(&self, k: i64, j: usize, d: usize, budget: &Budget) -> Result<Option<(ExtInt, ExtInt)>> {
        if k < 0 || j > d {
            return Ok(Some((ExtInt::NegInf, ExtInt::NegInf)));
        }
        let e = self.ext_omega(k as usize, budget)?;
        let x = if j == 0 {
            e
        } else {
            match h0_support_dim(&e, d - j, budget) {
                Ok(sub) => sub.presentation(e.ctx(), budget)?,
                Err(AlgebraError::OutOfScope(_)) => return Ok(None),
                Err(err) => return Err(err),
            }
        };
        if x.is_zero(budget)? {
            return Ok(Some((ExtInt::NegInf, ExtInt::NegInf)));
        }
        Ok(Some((a0_by_saturation(&x, budget)?, regularity(&x, budget)?.value)))
    }

    pub fn tame_thresholds(&self, i: usize, budget: &Budget) -> Result<TameThresholds> {
        if !self.module.ctx().is_polynomial_base() {
            return Err(AlgebraError::OutOfScope("thresholds need a polynomial base ring".into()));
        }
        let d = self.module.ctx().nbase();
        let k = self.n as i64 - i as i64;
        let pair = |kk: i64, j: usize| self.tame_pair(kk, j, d, budget);
        let a = |p: Option<(ExtInt, ExtInt)>| p.map(|x| x.0);
        let r = |p: Option<(ExtInt, ExtInt)>| p.map(|x| x.1);
        let max = |xs: &[Option<ExtInt>]| -> Option<ExtInt> { xs.iter().try_fold(ExtInt::NegInf, |acc, x| x.map(|v| acc.max(v))) };
        let p00 = pair(k, 0)?;
        let p10 = pair(k + 1, 0)?;
        let p11 = pair(k + 1, 1)?;
        let p12 = pair(k + 1, 2)?;
        let p22 = pair(k + 2, 2)?;
        Ok(TameThresholds {
            i,
            a: a(p00),
            b: r(p00),
            c: max(&[a(p11), a(p00)]),
            d: max(&[r(p11), r(p00)]),
            e: max(&[a(p00), r(p10).map(|x| x.add(-1)), r(p12).map(|x| x.add(-2)), a(p22)]),
        })
    }

    /// Checks each dimension statement on `γ > threshold` inside the window of `γ` values.
    /// Statements asking about a negative dimension level are not applicable.
    pub fn tame_implications(&self, i: usize, window: Window, budget: &Budget) -> Result<Vec<Verdict>> {
        let th = self.tame_thresholds(i, budget)?;
        let d = self.module.ctx().nbase();
        let mut dims: BTreeMap<i64, Option<usize>> = BTreeMap::new();
        let mut dim_at = |g: i64| -> Result<Option<usize>> {
            if let Some(v) = dims.get(&g) {
                return Ok(*v);
            }
            let v = self.cohomology_dim(i, -g, budget)?;
            dims.insert(g, v);
            Ok(v)
        };
        let mut out = Vec::new();
        for s in TameStatement::ALL {
            let check = Check::TameImplication(s);
            if s.codim() > d {
                out.push(Verdict::new(check, Outcome::NotApplicable, window, format!("dimension level {} below zero", d as i64 - s.codim() as i64)));
                continue;
            }
            let Some(t) = th.for_statement(s) else {
                out.push(Verdict::new(check, Outcome::Inconclusive, window, "threshold out of scope"));
                continue;
            };
            let level = d - s.codim();
            let holds = |v: Option<usize>| match s.codim() {
                0 => v == Some(d),
                _ => v.is_some_and(|x| x >= level),
            };
            let from = match t {
                ExtInt::Finite(t) => (t + 1).max(window.lo),
                ExtInt::NegInf => window.lo,
                ExtInt::PosInf => window.hi + 1,
            };
            let mut verdict = Verdict::new(check, Outcome::Pass, window, format!("gamma > {t}"));
            for g in from..window.hi {
                let (here, next) = (holds(dim_at(g)?), holds(dim_at(g + 1)?));
                let bad = if s.is_equivalence() { here != next } else { here && !next };
                if bad {
                    verdict.outcome = Outcome::Fail { degree: -g };
                    break;
                }
            }
            out.push(verdict);
        }
        Ok(out)
    }

    pub fn thresholds(&self, ideal: Option<&[Poly]>, budget: &Budget) -> Result<Thresholds> {
        let depth = match ideal {
            Some(i) => {
                let p = self.depth_profile(i, None, budget)?;
                p.d.map(|d| (d, p.mu0))
            }
            None => None,
        };
        let (tame, tame_scope) = if self.module.ctx().is_polynomial_base() {
            let mut t = Vec::new();
            for i in 0..=self.n {
                t.push(self.tame_thresholds(i, budget)?);
            }
            (t, None)
        } else {
            (Vec::new(), Some("base ring is not a polynomial ring".to_string()))
        };
        Ok(Thresholds {
            reg: self.reg,
            a0: self.a0,
            depth_s_plus: self.depth_s_plus,
            r: self.r(),
            cd_bound: self.cd_bound(),
            depth,
            tame,
            tame_scope,
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::monomial::MonomialOrder;
    use crate::ring::{PolyRing, RingContext};
    use crate::scalar::Field;

    fn ctx(base: &[&str], fiber: &[&str], rels: &[&str]) -> Arc<RingContext> {
        let r = PolyRing::new(Field::Rational, base, fiber, MonomialOrder::DegRevLex).unwrap();
        let rels = rels.iter().map(|s| Poly::parse(&r, s).unwrap()).collect();
        RingContext::new(r, rels).unwrap()
    }

    fn cyclic(c: &Arc<RingContext>, g: &[&str]) -> Module {
        Module::cyclic(c, &g.iter().map(|s| Poly::parse(c.ring(), s).unwrap()).collect::<Vec<_>>())
    }

    fn b() -> Budget {
        Budget::unlimited()
    }

    fn yx() -> Module {
        cyclic(&ctx(&["y"], &["x"], &[]), &["y*x"])
    }

    #[test]
    fn thresholds_of_yx() {
        let s = Stability::new(&yx(), &b()).unwrap();
        assert_eq!((s.reg, s.a0, s.depth_s_plus), (ExtInt::Finite(0), ExtInt::Finite(0), ExtInt::Finite(0)));
        assert_eq!(s.cd_bound(), Some(ExtInt::Finite(1)));
        assert_eq!(s.r(), ExtInt::Finite(0));
    }

    #[test]
    fn depth_and_cd_profiles_of_yx() {
        let m = yx();
        let s = Stability::new(&m, &b()).unwrap();
        let y = vec![Poly::parse(m.ctx().ring(), "y").unwrap()];
        let p = s.depth_profile(&y, Some(Window { lo: 0, hi: 20 }), &b()).unwrap();
        let vals: Vec<ExtInt> = p.values.iter().map(|v| v.1).collect();
        assert_eq!(vals[0], ExtInt::Finite(1));
        assert!(vals[1..].iter().all(|&v| v == ExtInt::Finite(0)));
        assert_eq!((p.d, p.mu0), (Some(ExtInt::Finite(0)), Some(1)));
        assert!(p.verdicts.iter().all(|v| v.passed()), "{:?}", p.verdicts);
        let c = s.cd_profile(&y, Some(Window { lo: 0, hi: 20 }), &b()).unwrap();
        assert_eq!(c.values[0].1.exact(), Some(ExtInt::Finite(1)));
        assert!(c.values[1..].iter().all(|v| v.1.exact() == Some(ExtInt::Finite(0))));
        // The drop at 1 happens at a0 = 0, where monotonicity is not claimed.
        assert!(c.verdicts.iter().all(|v| v.passed()), "{:?}", c.verdicts);
    }

    #[test]
    fn auto_window_extends_past_mu0() {
        let m = yx();
        let s = Stability::new(&m, &b()).unwrap();
        let y = vec![Poly::parse(m.ctx().ring(), "y").unwrap()];
        let p = s.depth_profile(&y, None, &b()).unwrap();
        assert!(p.window.hi >= 1 + STABLE_SPAN);
        assert!(p.verdicts[0].passed());
        let short = s.depth_profile(&y, Some(Window { lo: 0, hi: 5 }), &b()).unwrap();
        assert_eq!(short.verdicts[0].outcome, Outcome::Inconclusive);
    }

    #[test]
    fn ass_profile_and_union_of_yx() {
        let s = Stability::new(&yx(), &b()).unwrap();
        let a = s.ass_profile(Some(Window { lo: 0, hi: 10 }), &b()).unwrap();
        assert_eq!(a.values[0].1, BTreeSet::from([0u64]));
        assert!(a.values[1..].iter().all(|v| v.1 == BTreeSet::from([1u64])));
        assert_eq!(a.stable_from, Some(1));
        assert!(a.verdicts.iter().all(|v| v.passed()));
        let u = s.ass_union_check(None, &b()).unwrap();
        assert_eq!(u.contracted, BTreeSet::from([0u64, 1]));
        assert!(u.verdict.passed(), "{}", u.verdict);
    }

    #[test]
    fn lengths() {
        let s = Stability::new(&yx(), &b()).unwrap();
        let l = s.length_profile(1, Some(Window { lo: 0, hi: 6 }), &b()).unwrap();
        assert_eq!(l.values.iter().map(|v| v.1).collect::<Vec<_>>(), vec![0, 1, 1, 1, 1, 1, 1]);
        assert_eq!((l.j, l.j_exact), (ExtInt::Finite(0), true));
        assert!(l.verdict.passed());
        // Free over Q[y]/(y^2) with one fiber variable: length 2 at the height zero prime.
        let c = ctx(&["y"], &["x"], &["y^2"]);
        let f = Module::free(&c, vec![Bidegree::ZERO]);
        let s = Stability::new(&f, &b()).unwrap();
        let l = s.length_profile(1, Some(Window { lo: 0, hi: 5 }), &b()).unwrap();
        assert!(l.values.iter().all(|v| v.1 == 2), "{:?}", l.values);
        assert!(l.verdict.passed());
    }

    #[test]
    fn tameness_of_free_plane() {
        let c = ctx(&[], &["x1", "x2"], &[]);
        let f = Module::free(&c, vec![Bidegree::ZERO]);
        let s = Stability::new(&f, &b()).unwrap();
        let t = s.tameness_scan(2, None, &b()).unwrap();
        assert_eq!(t.gamma0, Some(-1));
        assert!(t.verdict.passed());
        let zero = s.tameness_scan(1, None, &b()).unwrap();
        assert_eq!(zero.gamma0, Some(zero.window.hi + 1));
        let th = s.tame_thresholds(2, &b()).unwrap();
        assert_eq!(th.a, Some(ExtInt::NegInf));
        assert_eq!(th.b, Some(ExtInt::Finite(2)));
        let v = s.tame_implications(2, Window { lo: -10, hi: 20 }, &b()).unwrap();
        assert!(v.iter().all(|x| !x.failed()), "{v:?}");
        assert!(v[0].passed() && v[1].passed());
    }

    #[test]
    fn tame_thresholds_over_line() {
        let c = ctx(&["y"], &["x"], &[]);
        for g in [vec!["y*x"], vec!["x^2", "y*x"], vec!["y^2*x"]] {
            let m = cyclic(&c, &g);
            let s = Stability::new(&m, &b()).unwrap();
            let w = s.default_tame_window();
            for i in 0..=1 {
                let v = s.tame_implications(i, Window { lo: -w.hi, hi: -w.lo }, &b()).unwrap();
                assert!(v.iter().all(|x| !x.failed()), "{g:?} i={i}: {v:?}");
            }
        }
    }

    #[test]
    fn nonvanishing_checks() {
        let c = ctx(&["y"], &["x1", "x2"], &[]);
        let m = cyclic(&c, &["x1^2", "x2^3"]);
        let s = Stability::new(&m, &b()).unwrap();
        assert!(s.nonvanishing(None).iter().all(|v| v.passed()));
        assert!(!s.is_nonzero_at(4));
    }

    #[test]
    fn finite_lengths() {
        let c = ctx(&["y1", "y2"], &[], &[]);
        assert_eq!(finite_length(&cyclic(&c, &["y1^2", "y2^3"]), &b()).unwrap(), 6);
        assert_eq!(finite_length(&cyclic(&c, &["y1", "y2"]), &b()).unwrap(), 1);
        assert!(finite_length(&cyclic(&c, &["y1"]), &b()).is_err());
        let k = ctx(&[], &[], &[]);
        assert_eq!(finite_length(&Module::free(&k, vec![Bidegree::ZERO; 3]), &b()).unwrap(), 3);
    }
}
