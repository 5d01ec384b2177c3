//! Content ideals and submodules of polynomials in auxiliary variables, the Dedekind–Mertens
//! identity, and Fitting ideals.

use std::collections::BTreeMap;

use crate::budget::Budget;
use crate::error::{AlgebraError, Result};
use crate::free::{FreeModule, Term, Vector};
use crate::groebner::groebner_basis;
use crate::ideal::Ideal;
use crate::module::Module;
use crate::monomial::Monomial;
use crate::poly::Poly;

/// Exponents of the auxiliary variables in a monomial.
fn t_part(m: &Monomial, t_vars: &[usize]) -> Vec<u16> {
    t_vars.iter().map(|&i| m.exps()[i]).collect()
}

fn strip(m: &Monomial, t_vars: &[usize]) -> Monomial {
    let mut out = m.clone();
    for &i in t_vars {
        out.set(i, 0);
    }
    out
}

/// Coefficients of `p` as a polynomial in the variables `t_vars`, one per `T`-monomial, in
/// increasing order of the `T`-exponent.
pub fn content(p: &Poly, t_vars: &[usize]) -> Vec<Poly> {
    let mut groups: BTreeMap<Vec<u16>, Vec<(Monomial, crate::scalar::Scalar)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        groups.entry(t_part(m, t_vars)).or_default().push((strip(m, t_vars), c.clone()));
    }
    groups.into_values().map(|terms| Poly::from_terms(p.ring(), terms)).collect()
}

/// Coefficient vectors of `v ∈ F[T]`, generating the content submodule `c(v) ⊆ F`.
pub fn content_module(f: &FreeModule, v: &Vector, t_vars: &[usize]) -> Vec<Vector> {
    let mut groups: BTreeMap<Vec<u16>, Vec<Term>> = BTreeMap::new();
    for t in v.terms() {
        groups.entry(t_part(&t.mon, t_vars)).or_default().push(Term {
            comp: t.comp,
            mon: strip(&t.mon, t_vars),
            coeff: t.coeff.clone(),
        });
    }
    groups.into_values().map(|terms| f.vector(terms)).collect()
}

/// `ℓ(Q)`: the number of nonzero `T`-coefficients.
pub fn coefficient_count(f: &FreeModule, v: &Vector, t_vars: &[usize]) -> usize {
    content_module(f, v, t_vars).len()
}

/// Reduced generators of the product of two ideals.
fn ideal_product(a: &[Poly], b: &[Poly], budget: &Budget) -> Result<Vec<Poly>> {
    let Some(first) = a.first().or(b.first()) else { return Ok(Vec::new()) };
    let ring = first.ring().clone();
    let mut gens = Vec::with_capacity(a.len() * b.len());
    for f in a {
        for g in b {
            gens.push(f.try_mul(g)?);
        }
    }
    Ideal::new(&ring, gens).gb_polys(budget)
}

/// Both sides of the Dedekind–Mertens identity and whether they agree.
#[derive(Clone, Debug)]
pub struct DmReport {
    pub ell: usize,
    /// Generators of `c(P)^{ℓ-1} c(PQ)`.
    pub lhs: Vec<Vector>,
    /// Generators of `c(P)^ℓ c(Q)`.
    pub rhs: Vec<Vector>,
    pub lhs_in_rhs: bool,
    pub rhs_in_lhs: bool,
}

impl DmReport {
    pub fn holds(&self) -> bool {
        self.lhs_in_rhs && self.rhs_in_lhs
    }
}

/// Checks `c(P)^{ℓ(Q)-1} c(PQ) = c(P)^{ℓ(Q)} c(Q)` for `P ∈ A[T]` and `Q ∈ F[T]`, both
/// inclusions decided by Gröbner membership in `F`.
pub fn dm_check_module(p: &Poly, f: &FreeModule, q: &Vector, t_vars: &[usize], budget: &Budget) -> Result<DmReport> {
    if **p.ring() != **f.ring() {
        return Err(AlgebraError::RingMismatch);
    }
    let cp = Ideal::new(p.ring(), content(p, t_vars)).gb_polys(budget)?;
    let cq = content_module(f, q, t_vars);
    let ell = cq.len();
    let pq = f.mul_poly(p, q);
    let cpq = content_module(f, &pq, t_vars);
    let one = vec![Poly::one(p.ring())];
    let mut power = one.clone();
    for _ in 1..ell {
        power = ideal_product(&power, &cp, budget)?;
    }
    let times = |ideal: &[Poly], sub: &[Vector]| -> Vec<Vector> {
        let mut out = Vec::new();
        for g in ideal {
            for v in sub {
                let w = f.mul_poly(g, v);
                if !w.is_zero() {
                    out.push(w);
                }
            }
        }
        out
    };
    let lhs = if ell == 0 { Vec::new() } else { times(&power, &cpq) };
    let full = if ell == 0 { one } else { ideal_product(&power, &cp, budget)? };
    let rhs = times(&full, &cq);
    let gl = groebner_basis(f, &lhs, budget)?;
    let gr = groebner_basis(f, &rhs, budget)?;
    let lhs_in_rhs = lhs.iter().all(|v| gr.contains(v));
    let rhs_in_lhs = rhs.iter().all(|v| gl.contains(v));
    Ok(DmReport { ell, lhs, rhs, lhs_in_rhs, rhs_in_lhs })
}

/// The ideal case of [`dm_check_module`].
pub fn dm_check(p: &Poly, q: &Poly, t_vars: &[usize], budget: &Budget) -> Result<DmReport> {
    let f = FreeModule::new(q.ring(), vec![crate::ring::Bidegree::ZERO]);
    dm_check_module(p, &f, &f.from_poly_at(0, q), t_vars, budget)
}

/// Minors of more than this many terms are refused.
const MAX_MINORS: usize = 20_000;

fn determinant(rows: &[Vec<Poly>]) -> Result<Poly> {
    let n = rows.len();
    let ring = rows[0][0].ring().clone();
    if n == 1 {
        return Ok(rows[0][0].clone());
    }
    let mut acc = Poly::zero(&ring);
    for c in 0..n {
        if rows[0][c].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Poly>> =
            rows[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, p)| p.clone()).collect()).collect();
        let term = rows[0][c].try_mul(&determinant(&sub)?)?;
        acc = if c % 2 == 0 { acc.try_add(&term)? } else { acc.try_sub(&term)? };
    }
    Ok(acc)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// `Fitt_k(M)`: the `(r-k)`-minors of the presentation matrix, `r` the number of generators,
/// as an ideal of the ambient polynomial ring containing the base relations. It is `(1)` when
/// `r ≤ k` and `(0)` when there are fewer than `r-k` relations.
pub fn fitting_ideal(m: &Module, k: usize, budget: &Budget) -> Result<Ideal> {
    let ring = m.ctx().ring().clone();
    let r = m.rank();
    let mut gens: Vec<Poly> = m.ctx().base_relations().to_vec();
    if r <= k {
        return Ok(Ideal::new(&ring, vec![Poly::one(&ring)]));
    }
    let t = r - k;
    let cols: Vec<Vec<Poly>> = m.relations().iter().map(|v| m.ambient().to_polys(v)).collect();
    let row_sets = combinations(r, t);
    let col_sets = combinations(cols.len(), t);
    if row_sets.len().saturating_mul(col_sets.len()) > MAX_MINORS {
        return Err(AlgebraError::OutOfScope(format!("{} minors of size {t}", row_sets.len() * col_sets.len())));
    }
    for rs in &row_sets {
        for cs in &col_sets {
            budget.charge(1)?;
            let sub: Vec<Vec<Poly>> = rs.iter().map(|&i| cs.iter().map(|&j| cols[j][i].clone()).collect()).collect();
            let d = determinant(&sub)?;
            if !d.is_zero() {
                gens.push(d);
            }
        }
    }
    Ok(Ideal::new(&ring, gens))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::monomial::MonomialOrder;
    use crate::ring::{Bidegree, PolyRing, RingContext};
    use crate::scalar::Field;

    fn ring(vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(Field::Rational, vars, &[], MonomialOrder::DegRevLex).unwrap()
    }

    fn p(r: &Arc<PolyRing>, s: &str) -> Poly {
        Poly::parse(r, s).unwrap()
    }

    fn b() -> Budget {
        Budget::unlimited()
    }

    #[test]
    fn content_examples() {
        let r = ring(&["y1", "y2", "T"]);
        let c = content(&p(&r, "y1 + y2*T"), &[2]);
        assert_eq!(c, vec![p(&r, "y1"), p(&r, "y2")]);
        assert_eq!(content(&p(&r, "y1*T"), &[2]), vec![p(&r, "y1")]);
        let f = FreeModule::new(&r, vec![Bidegree::ZERO; 2]);
        let q = f.from_polys(&[p(&r, "y1"), p(&r, "y2*T")]);
        let cq = content_module(&f, &q, &[2]);
        assert_eq!(cq, vec![f.from_poly_at(0, &p(&r, "y1")), f.from_poly_at(1, &p(&r, "y2"))]);
    }

    #[test]
    fn dm_examples() {
        let r = ring(&["a0", "a1", "b0", "b1", "T"]);
        let rep = dm_check(&p(&r, "a0 + a1*T"), &p(&r, "b0 + b1*T"), &[4], &b()).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.ell, 2);
        let r2 = ring(&["y1", "y2", "T"]);
        assert!(dm_check(&p(&r2, "y1"), &p(&r2, "y2"), &[2], &b()).unwrap().holds());
        let r3 = ring(&["T"]);
        assert!(dm_check(&p(&r3, "1 + T"), &p(&r3, "1 - T"), &[0], &b()).unwrap().holds());
    }

    /// With the exponent lowered to `ℓ-2` the inclusion `⊇` fails for the generic pair.
    #[test]
    fn dm_exponent_is_needed() {
        let r = ring(&["a0", "a1", "b0", "b1", "T"]);
        let pp = p(&r, "a0 + a1*T");
        let cp = Ideal::new(&r, content(&pp, &[4])).gb_polys(&b()).unwrap();
        let cq = content(&p(&r, "b0 + b1*T"), &[4]);
        let cpq = Ideal::new(&r, content(&pp.try_mul(&p(&r, "b0 + b1*T")).unwrap(), &[4]));
        let prod = Ideal::new(&r, ideal_product(&cp, &cq, &b()).unwrap());
        assert!(prod.contains_ideal(&cpq, &b()).unwrap());
        assert!(!cpq.contains_ideal(&prod, &b()).unwrap());
    }

    #[test]
    fn fitting_examples() {
        let r = ring(&["y1", "y2"]);
        let c = RingContext::polynomial(r.clone());
        let f = FreeModule::new(&r, vec![Bidegree::ZERO; 2]);
        let sum = Module::new(
            &c,
            vec![Bidegree::ZERO; 2],
            vec![f.from_poly_at(0, &p(&r, "y1")), f.from_poly_at(1, &p(&r, "y2"))],
        )
        .unwrap();
        let fit = fitting_ideal(&sum, 0, &b()).unwrap();
        assert!(fit.equals(&Ideal::new(&r, vec![p(&r, "y1*y2")]), &b()).unwrap());
        assert!(fitting_ideal(&sum, 1, &b()).unwrap().equals(&Ideal::new(&r, vec![p(&r, "y1"), p(&r, "y2")]), &b()).unwrap());
        let free = Module::free(&c, vec![Bidegree::ZERO]);
        assert!(fitting_ideal(&free, 0, &b()).unwrap().is_zero());
        assert!(fitting_ideal(&free, 1, &b()).unwrap().is_unit(&b()).unwrap());
        let q = Module::cyclic(&c, &[p(&r, "y1^2"), p(&r, "y1*y2")]);
        let fit = fitting_ideal(&q, 0, &b()).unwrap();
        assert!(fit.equals(&Ideal::new(&r, vec![p(&r, "y1^2"), p(&r, "y1*y2")]), &b()).unwrap());
    }

    /// `ann(M)^r ⊆ Fitt_0(M) ⊆ ann(M)`, so both have the same radical.
    #[test]
    fn fitting_brackets_annihilator() {
        let r = ring(&["y1", "y2"]);
        let c = RingContext::polynomial(r.clone());
        let f = FreeModule::new(&r, vec![Bidegree::ZERO; 2]);
        let m = Module::new(
            &c,
            vec![Bidegree::ZERO; 2],
            vec![f.from_polys(&[p(&r, "y1"), p(&r, "y2")]), f.from_polys(&[p(&r, "0"), p(&r, "y1^2")]), f.from_polys(&[p(&r, "y2"), p(&r, "0")])],
        )
        .unwrap();
        let fit = fitting_ideal(&m, 0, &b()).unwrap();
        let ann = Ideal::annihilator_of(&m, &b()).unwrap();
        assert!(ann.contains_ideal(&fit, &b()).unwrap());
        let sq = Ideal::new(&r, ideal_product(ann.gens(), ann.gens(), &b()).unwrap());
        assert!(fit.contains_ideal(&sq, &b()).unwrap());
    }
}
