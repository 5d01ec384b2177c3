//! Buchberger's algorithm for submodules of graded free modules.
//!
//! Pairs are selected by sugar, then by the degree of their lcm, then by index, so the
//! computation is deterministic. The Gebauer-Moeller update discards pairs by the chain
//! criterion; the product criterion is only applied for rank one, where it is valid.

use std::collections::BTreeMap;

use crate::budget::Budget;
use crate::error::Result;
use crate::free::{FreeModule, Term, Vector};
use crate::monomial::Monomial;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default)]
pub struct GbOptions {
    /// Ignore pairs and generators whose sugar exceeds this bound. Only meaningful for
    /// homogeneous input, where the result is then a basis up to that degree.
    pub degree_bound: Option<i64>,
}

#[derive(Clone, Debug)]
struct Lead {
    comp: usize,
    mon: Monomial,
    mask: u64,
}

fn mask_of(m: &Monomial) -> u64 {
    let mut mask = 0u64;
    for (i, &e) in m.exps().iter().enumerate() {
        if e > 0 {
            mask |= 1 << (i % 64);
        }
    }
    mask
}

impl Lead {
    fn of(v: &Vector) -> Lead {
        let t = v.lead().expect("nonzero vector");
        Lead { comp: t.comp, mon: t.mon.clone(), mask: mask_of(&t.mon) }
    }

    fn divides(&self, comp: usize, mon: &Monomial, mask: u64) -> bool {
        self.comp == comp && self.mask & !mask == 0 && self.mon.divides(mon)
    }
}

/// Reducer set indexed by lead component.
#[derive(Clone, Debug, Default)]
struct Reducers {
    leads: Vec<Lead>,
    by_comp: Vec<Vec<usize>>,
}

impl Reducers {
    fn push(&mut self, lead: Lead) -> usize {
        let idx = self.leads.len();
        if self.by_comp.len() <= lead.comp {
            self.by_comp.resize(lead.comp + 1, Vec::new());
        }
        self.by_comp[lead.comp].push(idx);
        self.leads.push(lead);
        idx
    }

    fn find(&self, t: &Term, skip: Option<usize>, active: Option<&[bool]>) -> Option<usize> {
        let mask = mask_of(&t.mon);
        self.by_comp.get(t.comp)?.iter().copied().find(|&i| {
            Some(i) != skip
                && active.is_none_or(|a| a[i])
                && self.leads[i].divides(t.comp, &t.mon, mask)
        })
    }
}

/// Full reduction of `v` by `elems`. Terms are processed in ascending storage so that
/// extracting the current leading term is a pop.
fn normal_form(
    fm: &FreeModule,
    v: &Vector,
    elems: &[Vector],
    red: &Reducers,
    skip: Option<usize>,
    active: Option<&[bool]>,
    budget: Option<&Budget>,
) -> Result<Vector> {
    let mut work: Vec<Term> = v.terms().iter().rev().cloned().collect();
    let mut rem: Vec<Term> = Vec::new();
    while let Some(t) = work.pop() {
        let Some(i) = red.find(&t, skip, active) else {
            rem.push(t);
            continue;
        };
        if let Some(b) = budget {
            b.charge(1)?;
        }
        let g = &elems[i];
        let lg = g.lead().expect("nonzero reducer");
        let m = lg.mon.quotient_of(&t.mon).expect("reducer divides");
        let c = &t.coeff / &lg.coeff;
        work = merge_ascending(fm, work, &g.terms()[1..], &c, &m);
    }
    Ok(rebuild(rem))
}

fn rebuild(terms: Vec<Term>) -> Vector {
    Vector::from_sorted_terms(terms)
}

/// `work - c*m*tail` where `work` is ascending and `tail` is descending.
fn merge_ascending(fm: &FreeModule, work: Vec<Term>, tail: &[Term], c: &Scalar, m: &Monomial) -> Vec<Term> {
    let mut out = Vec::with_capacity(work.len() + tail.len());
    let mut wi = work.into_iter().peekable();
    let mut ti = tail.iter().rev().peekable();
    loop {
        match (wi.peek(), ti.peek()) {
            (None, None) => break,
            (Some(_), None) => out.push(wi.next().unwrap()),
            (None, Some(_)) => {
                let t = ti.next().unwrap();
                out.push(Term { comp: t.comp, mon: t.mon.mul(m), coeff: -&(&t.coeff * c) });
            }
            (Some(w), Some(t)) => {
                let tm = t.mon.mul(m);
                match fm.cmp(w.comp, &w.mon, t.comp, &tm) {
                    std::cmp::Ordering::Less => out.push(wi.next().unwrap()),
                    std::cmp::Ordering::Greater => {
                        let t = ti.next().unwrap();
                        out.push(Term { comp: t.comp, mon: tm, coeff: -&(&t.coeff * c) });
                    }
                    std::cmp::Ordering::Equal => {
                        let mut w = wi.next().unwrap();
                        let t = ti.next().unwrap();
                        w.coeff.sub_mul_assign(&t.coeff, c);
                        if !w.coeff.is_zero() {
                            out.push(w);
                        }
                    }
                }
            }
        }
    }
    out
}

/// A reduced Groebner basis: monic, leads pairwise non-divisible, tails reduced.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    module: FreeModule,
    elems: Vec<Vector>,
    red: Reducers,
}

impl GroebnerBasis {
    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn elems(&self) -> &[Vector] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Normal form of `v`; zero exactly when `v` lies in the submodule.
    pub fn reduce(&self, v: &Vector) -> Vector {
        normal_form(&self.module, v, &self.elems, &self.red, None, None, None).expect("no budget")
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Lead terms `(component, monomial)` of the basis.
    pub fn leads(&self) -> impl Iterator<Item = (usize, &Monomial)> {
        self.red.leads.iter().map(|l| (l.comp, &l.mon))
    }

    /// Whether the term `mon * e_comp` is a lead term multiple.
    pub fn is_lead_multiple(&self, comp: usize, mon: &Monomial) -> bool {
        let mask = mask_of(mon);
        self.red
            .by_comp
            .get(comp)
            .is_some_and(|ix| ix.iter().any(|&i| self.red.leads[i].divides(comp, mon, mask)))
    }

    /// Whether the submodule contains `e_comp`.
    pub fn contains_unit(&self, comp: usize) -> bool {
        self.is_lead_multiple(comp, &self.module.ring().one_monomial())
    }

    /// Whether the submodule is the whole free module.
    pub fn is_everything(&self) -> bool {
        (0..self.module.rank()).all(|j| self.contains_unit(j))
    }

    /// Cached basis for an externally known Groebner basis (already reduced and monic).
    pub(crate) fn from_reduced(module: FreeModule, elems: Vec<Vector>) -> GroebnerBasis {
        let mut red = Reducers::default();
        for e in &elems {
            red.push(Lead::of(e));
        }
        GroebnerBasis { module, elems, red }
    }
}

type PairKey = (i64, i64, usize, usize);

pub fn groebner_basis(fm: &FreeModule, gens: &[Vector], budget: &Budget) -> Result<GroebnerBasis> {
    groebner_basis_with(fm, gens, GbOptions::default(), budget)
}

pub fn groebner_basis_with(
    fm: &FreeModule,
    gens: &[Vector],
    opts: GbOptions,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    let mut inputs: Vec<(i64, usize)> = gens
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_zero())
        .map(|(i, g)| (fm.top_degree(g).expect("nonzero"), i))
        .collect();
    inputs.sort();
    let mut inputs = inputs.into_iter().peekable();

    let rank_one = fm.rank() == 1;
    let mut elems: Vec<Vector> = Vec::new();
    let mut sugars: Vec<i64> = Vec::new();
    let mut red = Reducers::default();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: BTreeMap<PairKey, Monomial> = BTreeMap::new();
    let within = |s: i64| opts.degree_bound.is_none_or(|b| s <= b);

    loop {
        let next_pair = pairs.keys().next().copied();
        let take_input = match (inputs.peek(), next_pair) {
            (None, None) => break,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(&(d, _)), Some(k)) => d <= k.0,
        };
        let (candidate, sugar) = if take_input {
            let (d, i) = inputs.next().unwrap();
            if !within(d) {
                continue;
            }
            (gens[i].clone(), d)
        } else {
            let key = next_pair.unwrap();
            let lcm = pairs.remove(&key).unwrap();
            let (sugar, _, j, i) = key;
            if !within(sugar) {
                continue;
            }
            budget.charge(1)?;
            (s_vector(fm, &elems[i], &elems[j], &lcm), sugar)
        };
        let h = normal_form(fm, &candidate, &elems, &red, None, None, Some(budget))?;
        if h.is_zero() {
            continue;
        }
        let h = h.monic();
        let lead = Lead::of(&h);
        let t = elems.len();

        // Chain criterion on pending pairs.
        pairs.retain(|&(_, _, j, i), lcm| {
            if red.leads[i].comp != lead.comp {
                return true;
            }
            if !lead.mon.divides(lcm) {
                return true;
            }
            let li = red.leads[i].mon.lcm(&lead.mon);
            let lj = red.leads[j].mon.lcm(&lead.mon);
            li == *lcm || lj == *lcm
        });

        // Candidate pairs with the new element.
        let mut cands: Vec<(usize, Monomial, bool)> = Vec::new();
        if let Some(ix) = red.by_comp.get(lead.comp) {
            for &i in ix {
                if !active[i] {
                    continue;
                }
                let li = &red.leads[i].mon;
                cands.push((i, li.lcm(&lead.mon), rank_one && li.is_coprime(&lead.mon)));
            }
        }
        let keep_m: Vec<bool> = cands
            .iter()
            .map(|(i, l, _)| {
                !cands
                    .iter()
                    .any(|(k, lk, _)| k != i && lk.divides(l) && lk != l)
            })
            .collect();
        let mut seen: Vec<&Monomial> = Vec::new();
        for (idx, (i, l, coprime)) in cands.iter().enumerate() {
            if !keep_m[idx] || seen.contains(&l) {
                continue;
            }
            seen.push(l);
            let group_coprime = cands
                .iter()
                .zip(&keep_m)
                .any(|((_, l2, c2), &k)| k && l2 == l && *c2);
            if group_coprime || *coprime {
                continue;
            }
            let ui = l.degree() - red.leads[*i].mon.degree();
            let ut = l.degree() - lead.mon.degree();
            let s = (sugars[*i] + ui).max(sugar + ut);
            let ldeg = fm.weighted_degree(lead.comp, l);
            pairs.insert((s, ldeg, t, *i), l.clone());
        }

        // Older elements whose lead is a multiple of the new lead no longer form pairs.
        if let Some(ix) = red.by_comp.get(lead.comp) {
            for &i in ix {
                if active[i] && lead.mon.divides(&red.leads[i].mon) {
                    active[i] = false;
                }
            }
        }
        red.push(lead);
        active.push(true);
        elems.push(h);
        sugars.push(sugar);
    }

    interreduce(fm, elems, &active, budget)
}

fn s_vector(fm: &FreeModule, a: &Vector, b: &Vector, lcm: &Monomial) -> Vector {
    let la = a.lead().unwrap();
    let lb = b.lead().unwrap();
    let ua = la.mon.quotient_of(lcm).unwrap();
    let ub = lb.mon.quotient_of(lcm).unwrap();
    let one = fm.ring().field().one();
    fm.sub_mul(&a.mul_term(&one, &ua), &one, &ub, b)
}

fn interreduce(fm: &FreeModule, elems: Vec<Vector>, active: &[bool], budget: &Budget) -> Result<GroebnerBasis> {
    let kept: Vec<Vector> = elems
        .into_iter()
        .zip(active)
        .filter(|(_, &a)| a)
        .map(|(v, _)| v)
        .collect();
    let mut red = Reducers::default();
    for v in &kept {
        red.push(Lead::of(v));
    }
    let mut out = Vec::with_capacity(kept.len());
    for (i, v) in kept.iter().enumerate() {
        let lead = Vector::from_sorted_terms(vec![v.lead().unwrap().clone()]);
        let tail = Vector::from_sorted_terms(v.terms()[1..].to_vec());
        let tail = normal_form(fm, &tail, &kept, &red, Some(i), None, Some(budget))?;
        out.push(fm.add(&lead, &tail).monic());
    }
    out.sort_by(|a, b| {
        let (la, lb) = (a.lead().unwrap(), b.lead().unwrap());
        fm.cmp(la.comp, &la.mon, lb.comp, &lb.mon)
    });
    Ok(GroebnerBasis::from_reduced(fm.clone(), out))
}
