//! Fiber-degree support of graded modules, read off from lead terms.
//!
//! For a bigraded module the standard monomials of a Groebner basis of the relations form a
//! basis in each bidegree, and the set of standard terms is closed under division. Hence `M`
//! is nonzero in fiber degree `t` iff some pure-fiber standard term `u e_j` has
//! `deg u + fiber(e_j) = t`.

use std::collections::HashSet;

use crate::budget::Budget;
use crate::error::Result;
use crate::extended::ExtInt;
use crate::groebner::GroebnerBasis;
use crate::module::Module;
use crate::monomial::Monomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentSupport {
    Empty,
    /// Standard pure-fiber monomials form a finite set.
    Bounded { min: i64, max: i64 },
    Unbounded { min: i64 },
}

#[derive(Clone, Debug)]
pub struct FiberSupport {
    comps: Vec<ComponentSupport>,
    /// Pure-fiber lead exponents per component, restricted to the fiber variables.
    leads: Vec<Vec<Monomial>>,
    twists: Vec<i64>,
    nfiber: usize,
}

impl FiberSupport {
    pub fn of(m: &Module, budget: &Budget) -> Result<FiberSupport> {
        let gb = m.relation_gb(budget)?;
        Ok(Self::from_gb(m, gb))
    }

    pub fn from_gb(m: &Module, gb: &GroebnerBasis) -> FiberSupport {
        let ring = m.ctx().ring();
        let fr = ring.fiber_range();
        let nb = ring.nbase();
        let n = ring.nfiber();
        let mut leads: Vec<Vec<Monomial>> = vec![Vec::new(); m.rank()];
        for (c, mon) in gb.leads() {
            if mon.exps()[..nb].iter().all(|&e| e == 0) {
                leads[c].push(mon.slice(fr.clone()));
            }
        }
        let twists: Vec<i64> = m.twists().iter().map(|t| t.fiber as i64).collect();
        let comps = (0..m.rank())
            .map(|j| {
                let ls = &leads[j];
                if ls.iter().any(|l| l.is_one()) {
                    return ComponentSupport::Empty;
                }
                let bounded = (0..n).all(|i| {
                    ls.iter().any(|l| l.support().all(|v| v == i) && l.exps()[i] > 0)
                });
                if bounded {
                    let max = max_standard_degree(ls, n);
                    ComponentSupport::Bounded { min: twists[j], max: twists[j] + max }
                } else {
                    ComponentSupport::Unbounded { min: twists[j] }
                }
            })
            .collect();
        FiberSupport { comps, leads, twists, nfiber: n }
    }

    pub fn components(&self) -> &[ComponentSupport] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| *c == ComponentSupport::Empty)
    }

    pub fn is_bounded(&self) -> bool {
        self.comps.iter().all(|c| !matches!(c, ComponentSupport::Unbounded { .. }))
    }

    /// Largest fiber degree with `M_t != 0`: `-inf` for zero, `+inf` when unbounded.
    pub fn max_degree(&self) -> ExtInt {
        let mut best = ExtInt::NegInf;
        for c in &self.comps {
            let v = match c {
                ComponentSupport::Empty => ExtInt::NegInf,
                ComponentSupport::Bounded { max, .. } => ExtInt::Finite(*max),
                ComponentSupport::Unbounded { .. } => ExtInt::PosInf,
            };
            best = best.max(v);
        }
        best
    }

    /// Smallest fiber degree with `M_t != 0`: `+inf` for zero.
    pub fn min_degree(&self) -> ExtInt {
        let mut best = ExtInt::PosInf;
        for c in &self.comps {
            let v = match c {
                ComponentSupport::Empty => ExtInt::PosInf,
                ComponentSupport::Bounded { min, .. } | ComponentSupport::Unbounded { min } => ExtInt::Finite(*min),
            };
            best = best.min(v);
        }
        best
    }

    pub fn is_nonzero_at(&self, t: i64) -> bool {
        self.comps.iter().enumerate().any(|(j, c)| match c {
            ComponentSupport::Empty => false,
            ComponentSupport::Bounded { min, max } if t < *min || t > *max => false,
            ComponentSupport::Unbounded { min } if t < *min => false,
            _ => {
                let d = t - self.twists[j];
                has_standard_of_degree(&self.leads[j], self.nfiber, d)
            }
        })
    }
}

fn divisible(leads: &[Monomial], m: &Monomial) -> bool {
    leads.iter().any(|l| l.divides(m))
}

/// Maximal degree of a monomial outside the monomial ideal (which must be Artinian).
fn max_standard_degree(leads: &[Monomial], n: usize) -> i64 {
    let mut seen: HashSet<Monomial> = HashSet::new();
    let mut stack = vec![Monomial::one(n)];
    let mut best = 0;
    while let Some(m) = stack.pop() {
        if !seen.insert(m.clone()) {
            continue;
        }
        best = best.max(m.degree());
        for i in 0..n {
            let next = m.mul(&Monomial::var(n, i));
            if !divisible(leads, &next) && !seen.contains(&next) {
                stack.push(next);
            }
        }
    }
    best
}

/// Whether some monomial of degree `d` in `n` variables avoids the ideal.
fn has_standard_of_degree(leads: &[Monomial], n: usize, d: i64) -> bool {
    if d < 0 {
        return false;
    }
    if n == 0 {
        return d == 0 && !leads.iter().any(|l| l.is_one());
    }
    let mut found = false;
    for_each_monomial(n, d as u16, &mut |m| {
        if !found && !divisible(leads, m) {
            found = true;
        }
    });
    found
}

/// Calls `f` on every monomial of degree `d` in `n` variables, in lex-descending order.
pub fn for_each_monomial(n: usize, d: u16, f: &mut impl FnMut(&Monomial)) {
    let mut exps = vec![0u16; n];
    fn rec(exps: &mut Vec<u16>, i: usize, left: u16, f: &mut impl FnMut(&Monomial)) {
        let n = exps.len();
        if i == n - 1 {
            exps[i] = left;
            f(&Monomial::from_exponents(exps));
            exps[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(exps, i + 1, left - e, f);
        }
        exps[i] = 0;
    }
    if n == 0 {
        if d == 0 {
            f(&Monomial::one(0));
        }
        return;
    }
    rec(&mut exps, 0, d, f);
}

/// All monomials of degree `d` in `n` variables.
pub fn monomials_of_degree(n: usize, d: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if d >= 0 {
        for_each_monomial(n, d as u16, &mut |m| out.push(m.clone()));
    }
    out
}
