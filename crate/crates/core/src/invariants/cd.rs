//! Cohomological dimension `cd_I(N)`: exact for monomial `I` and monomial `ann(N)`, otherwise
//! bracketed between `depth_I(N)` and the generator count and support dimension.

use std::fmt;

use crate::budget::Budget;
use crate::error::{AlgebraError, Result};
use crate::extended::ExtInt;
use crate::free::Vector;
use crate::ideal::{support_mask, Ideal};
use crate::invariants::ass::{monomial_annihilator, monomial_minimal_primes, PrimeIdeal};
use crate::invariants::depth::depth_wrt;
use crate::linalg::{rank, SparseRow};
use crate::module::{Module, Subquotient};
use crate::poly::Poly;
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdValue {
    Exact(ExtInt),
    Interval { lo: ExtInt, hi: ExtInt },
}

impl CdValue {
    pub fn is_exact(self) -> bool {
        matches!(self, CdValue::Exact(_))
    }

    pub fn lo(self) -> ExtInt {
        match self {
            CdValue::Exact(v) => v,
            CdValue::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(self) -> ExtInt {
        match self {
            CdValue::Exact(v) => v,
            CdValue::Interval { hi, .. } => hi,
        }
    }

    pub fn exact(self) -> Option<ExtInt> {
        match self {
            CdValue::Exact(v) => Some(v),
            CdValue::Interval { .. } => None,
        }
    }
}

impl fmt::Display for CdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CdValue::Exact(v) => write!(f, "{v}"),
            CdValue::Interval { lo, hi } => write!(f, "[{lo},{hi}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthCdResult {
    pub depth: ExtInt,
    pub cd: CdValue,
    /// Minimal primes of `Supp(N)` with `cd_I(R/p)`, in the exact regime.
    pub minimal_primes: Vec<(PrimeIdeal, ExtInt)>,
}

impl DepthCdResult {
    pub fn is_exact(&self) -> bool {
        self.cd.is_exact()
    }
}

/// Squarefree supports of a minimal generating set of `sqrt(I)` for monomial `I`.
pub fn radical_supports(masks: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut all: Vec<u64> = masks.into_iter().collect();
    all.sort_by_key(|m| (m.count_ones(), *m));
    all.dedup();
    let mut out: Vec<u64> = Vec::new();
    for m in all {
        if !out.iter().any(|&o| o & m == o) {
            out.push(m);
        }
    }
    out
}

/// `cd_I(k[V])` for `I` generated by the squarefree monomials with the given supports.
///
/// The Čech complex on the generators is `Z^V`-graded; in degree `a` the localization at
/// `m_J` is one-dimensional iff every negative coordinate of `a` lies in `supp(m_J)`. So the
/// graded piece depends only on the negative set `N`, and `C^p_N` has one basis vector per
/// `J` with `|J| = p` and `N ⊆ ⋃_{j ∈ J} supp(m_j)`.
pub fn cd_squarefree(field: Field, supports: &[u64]) -> ExtInt {
    let k = supports.len();
    assert!(k < 24, "too many generators for pattern evaluation");
    let universe = supports.iter().fold(0u64, |a, &s| a | s);
    let bits: Vec<u32> = (0..64).filter(|i| universe >> i & 1 == 1).collect();
    let union = |j: u32| -> u64 { (0..k).filter(|i| j >> i & 1 == 1).fold(0u64, |a, i| a | supports[i]) };
    let unions: Vec<u64> = (0..(1u32 << k)).map(union).collect();
    let one = field.one();
    let minus = -&one;
    let mut cd = ExtInt::NegInf;
    for s in 0..(1u64 << bits.len()) {
        let neg = bits.iter().enumerate().filter(|(i, _)| s >> i & 1 == 1).fold(0u64, |a, (_, &b)| a | 1 << b);
        let mut levels: Vec<Vec<u32>> = vec![Vec::new(); k + 1];
        for j in 0..(1u32 << k) {
            if unions[j as usize] & neg == neg {
                levels[j.count_ones() as usize].push(j);
            }
        }
        let ranks: Vec<usize> = (0..k)
            .map(|p| {
                let target: std::collections::HashMap<u32, usize> =
                    levels[p + 1].iter().enumerate().map(|(i, &j)| (j, i)).collect();
                let rows = levels[p].iter().map(|&j| {
                    let mut row: SparseRow = Vec::new();
                    let mut before = 0;
                    for i in 0..k {
                        if j >> i & 1 == 1 {
                            before += 1;
                            continue;
                        }
                        let c = if before % 2 == 0 { one.clone() } else { minus.clone() };
                        row.push((target[&(j | 1 << i)], c));
                    }
                    row.sort_by_key(|e| e.0);
                    row
                });
                rank(rows)
            })
            .collect();
        for p in (0..=k).rev() {
            if ExtInt::Finite(p as i64) <= cd {
                break;
            }
            let incoming = if p == 0 { 0 } else { ranks[p - 1] };
            let outgoing = if p == k { 0 } else { ranks[p] };
            if levels[p].len() > incoming + outgoing {
                cd = ExtInt::Finite(p as i64);
                break;
            }
        }
    }
    cd
}

/// Supports of monomial generators, or `None` if some generator is not a monomial.
fn monomial_supports(gens: &[Poly]) -> Option<Vec<u64>> {
    gens.iter().map(|g| g.is_monomial().then(|| support_mask(&g.terms()[0].0))).collect()
}

/// `cd_I(P/p)` for a monomial prime `p`: `P/p` is the polynomial ring on the other variables,
/// where `I` becomes `I` with the variables of `p` set to zero.
pub fn cd_on_prime(field: Field, i_supports: &[u64], p: u64) -> ExtInt {
    let surviving = i_supports.iter().copied().filter(|s| s & p == 0);
    cd_squarefree(field, &radical_supports(surviving))
}

/// Generators of `I` none of which lies in the ideal of the others.
pub fn irredundant_generators(gens: &[Poly], budget: &Budget) -> Result<Vec<Poly>> {
    let mut kept: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut i = 0;
    while i < kept.len() {
        if kept.len() > 1 {
            let ring = kept[i].ring().clone();
            let others: Vec<Poly> = kept.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, g)| g.clone()).collect();
            if Ideal::new(&ring, others).contains(&kept[i], budget)? {
                kept.remove(i);
                continue;
            }
        }
        i += 1;
    }
    Ok(kept)
}

/// `depth_I(N)` together with `cd_I(N)`.
pub fn cd_wrt(gens: &[Poly], n: &Module, budget: &Budget) -> Result<DepthCdResult> {
    let ring = n.ctx().ring().clone();
    let depth = depth_wrt(gens, n, budget)?.value;
    if depth == ExtInt::PosInf {
        // N = IN: every H^i_I(N) vanishes.
        return Ok(DepthCdResult { depth, cd: CdValue::Exact(ExtInt::NegInf), minimal_primes: Vec::new() });
    }
    let i_gb = Ideal::new(&ring, gens.to_vec()).gb_polys(budget)?;
    if let (Some(i_sup), Some(ann)) = (monomial_supports(&i_gb), monomial_annihilator(n, budget)?) {
        let mut best = ExtInt::NegInf;
        let mut per = Vec::new();
        for p in monomial_minimal_primes(&ann) {
            let v = cd_on_prime(ring.field(), &i_sup, p);
            best = best.max(v);
            per.push((PrimeIdeal::monomial(&ring, p), v));
        }
        if best < depth {
            return Err(AlgebraError::Tripwire(format!("cd {best} below depth {depth}")));
        }
        return Ok(DepthCdResult { depth, cd: CdValue::Exact(best), minimal_primes: per });
    }
    let count = irredundant_generators(gens, budget)?.len() as i64;
    let dim = Ideal::annihilator_of(n, budget)?.dimension(budget)?;
    let hi = match dim {
        Some(d) => ExtInt::Finite(count.min(d as i64)),
        None => ExtInt::NegInf,
    };
    Ok(DepthCdResult { depth, cd: CdValue::Interval { lo: depth, hi }, minimal_primes: Vec::new() })
}

fn exact_cd(gens: &[Poly], n: &Module, budget: &Budget) -> Result<ExtInt> {
    cd_wrt(gens, n, budget)?
        .cd
        .exact()
        .ok_or_else(|| AlgebraError::OutOfScope("identity checks need exact cd: monomial ideal and annihilator".into()))
}

fn plus(a: ExtInt, b: ExtInt) -> ExtInt {
    match (a, b) {
        (ExtInt::NegInf, _) | (_, ExtInt::NegInf) => ExtInt::NegInf,
        (ExtInt::Finite(x), ExtInt::Finite(y)) => ExtInt::Finite(x + y),
        _ => ExtInt::PosInf,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: ExtInt,
    pub rhs: ExtInt,
    pub relation: Relation,
}

impl IdentityCheck {
    fn new(name: &'static str, lhs: ExtInt, relation: Relation, rhs: ExtInt) -> IdentityCheck {
        IdentityCheck { name, lhs, rhs, relation }
    }

    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.lhs <= self.rhs,
            Relation::Equal => self.lhs == self.rhs,
        }
    }
}

/// Inputs for [`cd_identities_check`]. `sub` spans `M'` in `0 → M' → M → M/M' → 0`; `a` is an
/// ideal with `a^t M = 0` for some `t`.
pub struct IdentityInputs<'a> {
    pub module: &'a Module,
    pub i: &'a [Poly],
    pub j: &'a [Poly],
    pub sub: Option<&'a [Vector]>,
    pub a: Option<&'a [Poly]>,
}

/// Largest power tried when looking for `a^t ⊆ ann(M)`.
const MAX_ANNIHILATING_POWER: u32 = 8;

/// Evaluates both sides of the subadditivity, exact-sequence, annihilator and support
/// identities for `cd`, each exactly.
pub fn cd_identities_check(inp: &IdentityInputs<'_>, budget: &Budget) -> Result<Vec<IdentityCheck>> {
    let m = inp.module;
    let ring = m.ctx().ring().clone();
    let mut out = Vec::new();
    let cd_i = exact_cd(inp.i, m, budget)?;
    let cd_j = exact_cd(inp.j, m, budget)?;
    let sum: Vec<Poly> = inp.i.iter().chain(inp.j).cloned().collect();
    out.push(IdentityCheck::new("cd(I+J) <= cd(I) + cd(J)", exact_cd(&sum, m, budget)?, Relation::AtMost, plus(cd_i, cd_j)));
    let ann = Ideal::annihilator_of(m, budget)?;
    let quotient = Module::cyclic(m.ctx(), ann.gens());
    let cd_ann = exact_cd(inp.i, &quotient, budget)?;
    out.push(IdentityCheck::new("cd(M) = cd(R/ann M)", cd_i, Relation::Equal, cd_ann));
    if let Some(sub) = inp.sub {
        let m1 = Subquotient::of_module(m, sub.to_vec()).presentation(m.ctx(), budget)?;
        let m2 = m.with_relations(sub.iter().cloned());
        let side = exact_cd(inp.i, &m1, budget)?.max(exact_cd(inp.i, &m2, budget)?);
        out.push(IdentityCheck::new("cd(M) <= max(cd M', cd M'')", cd_i, Relation::AtMost, side));
        out.push(IdentityCheck::new("max(cd M', cd M'') <= cd(R/ann M)", side, Relation::AtMost, cd_ann));
        out.push(IdentityCheck::new("cd(M) = max(cd M', cd M'')", cd_i, Relation::Equal, side));
    }
    if let Some(a) = inp.a {
        let mut power = Ideal::new(&ring, a.to_vec());
        let mut t = 1;
        while !ann.contains_ideal(&power, budget)? {
            if t == MAX_ANNIHILATING_POWER {
                return Err(AlgebraError::InvalidInput(format!(
                    "no power a^t with t <= {MAX_ANNIHILATING_POWER} annihilates the module"
                )));
            }
            let mut next = Vec::new();
            for f in power.gens() {
                for g in a {
                    next.push(f.try_mul(g)?);
                }
            }
            power = Ideal::new(&ring, next);
            t += 1;
        }
        out.push(IdentityCheck::new("cd(M) = cd(M/aM)", cd_i, Relation::Equal, exact_cd(inp.i, &m.mod_ideal(a), budget)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::monomial::MonomialOrder;
    use crate::resolution::free_resolution;
    use crate::ring::{Bidegree, PolyRing, RingContext};

    fn ctx(base: &[&str]) -> Arc<RingContext> {
        RingContext::polynomial(PolyRing::new(Field::Rational, base, &[], MonomialOrder::DegRevLex).unwrap())
    }

    fn polys(c: &Arc<RingContext>, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|x| Poly::parse(c.ring(), x).unwrap()).collect()
    }

    fn b() -> Budget {
        Budget::unlimited()
    }

    #[test]
    fn spec_examples() {
        let c = ctx(&["y1", "y2"]);
        let r = Module::free(&c, vec![Bidegree::ZERO]);
        let i = polys(&c, &["y1", "y2"]);
        assert_eq!(cd_wrt(&i, &r, &b()).unwrap().cd, CdValue::Exact(ExtInt::Finite(2)));
        let q = Module::cyclic(&c, &polys(&c, &["y1"]));
        let res = cd_wrt(&i, &q, &b()).unwrap();
        assert_eq!(res.cd, CdValue::Exact(ExtInt::Finite(1)));
        assert_eq!(res.minimal_primes.len(), 1);
        assert_eq!(cd_wrt(&polys(&c, &["y1*y2"]), &r, &b()).unwrap().cd, CdValue::Exact(ExtInt::Finite(1)));
        assert_eq!(cd_wrt(&polys(&c, &["1"]), &r, &b()).unwrap().cd, CdValue::Exact(ExtInt::NegInf));
        assert_eq!(cd_wrt(&[], &r, &b()).unwrap().cd, CdValue::Exact(ExtInt::Finite(0)));
    }

    #[test]
    fn non_monomial_gives_interval() {
        let c = ctx(&["y1", "y2"]);
        let r = Module::free(&c, vec![Bidegree::ZERO]);
        let res = cd_wrt(&polys(&c, &["y1 + y2", "y1*y2"]), &r, &b()).unwrap();
        assert_eq!(res.cd, CdValue::Interval { lo: ExtInt::Finite(2), hi: ExtInt::Finite(2) });
        let res = cd_wrt(&polys(&c, &["y1^2 + y2^2"]), &r, &b()).unwrap();
        assert_eq!(res.cd, CdValue::Interval { lo: ExtInt::Finite(1), hi: ExtInt::Finite(1) });
    }

    /// Lyubeznik: for squarefree monomial `I`, `cd_I(P) = pd_P(P/I)`.
    fn projective_dimension(c: &Arc<RingContext>, gens: &[Poly]) -> i64 {
        let res = free_resolution(&Module::cyclic(c, gens), None, &b()).unwrap();
        (0..=res.length()).filter(|&k| res.rank(k) > 0).max().unwrap() as i64
    }

    #[test]
    fn squarefree_cd_is_projective_dimension() {
        let c = ctx(&["a", "b", "c", "d"]);
        for g in [
            vec!["a*b", "c*d"],
            vec!["a*b", "b*c", "c*d"],
            vec!["a*b", "b*c", "c*d", "d*a"],
            vec!["a*b*c", "b*c*d"],
            vec!["a*b", "a*c", "a*d", "b*c", "b*d", "c*d"],
            vec!["a", "b*c*d"],
            vec!["a*c", "b*d", "a*d"],
        ] {
            let gens = polys(&c, &g);
            let r = Module::free(&c, vec![Bidegree::ZERO]);
            let cd = cd_wrt(&gens, &r, &b()).unwrap().cd;
            assert_eq!(cd, CdValue::Exact(ExtInt::Finite(projective_dimension(&c, &gens))), "{g:?}");
        }
    }

    #[test]
    fn radical_and_minimal_generators() {
        assert_eq!(radical_supports([0b11, 0b01, 0b111]), vec![0b01]);
        let c = ctx(&["y1", "y2"]);
        let g = irredundant_generators(&polys(&c, &["y1", "y1*y2", "y2^2"]), &b()).unwrap();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn identity_checks() {
        let c = ctx(&["y1", "y2"]);
        let r = Module::free(&c, vec![Bidegree::ZERO]);
        let i = polys(&c, &["y1"]);
        let j = polys(&c, &["y2"]);
        let checks = cd_identities_check(&IdentityInputs { module: &r, i: &i, j: &j, sub: None, a: None }, &b()).unwrap();
        assert_eq!(checks[0].lhs, ExtInt::Finite(2));
        assert_eq!(checks[0].rhs, ExtInt::Finite(2));
        assert!(checks.iter().all(|c| c.holds()));
        let m = Module::cyclic(&c, &polys(&c, &["y1*y2"]));
        let sub = vec![m.ambient().from_poly_at(0, &Poly::parse(c.ring(), "y1").unwrap())];
        let a = polys(&c, &["y1*y2"]);
        let inp = IdentityInputs { module: &m, i: &i, j: &j, sub: Some(&sub), a: Some(&a) };
        let checks = cd_identities_check(&inp, &b()).unwrap();
        assert_eq!(checks.len(), 6);
        assert!(checks.iter().all(|c| c.holds()), "{checks:?}");
        let sq = Module::cyclic(&c, &polys(&c, &["y1^2"]));
        let a = polys(&c, &["y1"]);
        let inp = IdentityInputs { module: &sq, i: &j, j: &i, sub: None, a: Some(&a) };
        let checks = cd_identities_check(&inp, &b()).unwrap();
        assert!(checks.iter().all(|c| c.holds()));
        let bad = polys(&c, &["y2"]);
        let inp = IdentityInputs { module: &sq, i: &j, j: &i, sub: None, a: Some(&bad) };
        assert!(cd_identities_check(&inp, &b()).is_err());
    }
}
