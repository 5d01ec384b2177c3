//! Brute-force answers for modules `⊕ S/J_c(-t_c)` with monomial `J_c`, computed from
//! exponent vectors alone. None of this goes through Groebner bases or resolutions.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gstab_corpus::{compositions, MonomialModule};

/// A monomial ideal by its generators; an empty list is the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mono {
    pub nvars: usize,
    pub gens: Vec<Vec<u16>>,
}

fn le(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl Mono {
    pub fn new(nvars: usize, gens: Vec<Vec<u16>>) -> Mono {
        let mut m = Mono { nvars, gens };
        m.minimalize();
        m
    }

    fn minimalize(&mut self) {
        self.gens.sort();
        self.gens.dedup();
        let all = self.gens.clone();
        self.gens.retain(|g| !all.iter().any(|h| h != g && le(h, g)));
    }

    pub fn contains(&self, w: &[u16]) -> bool {
        self.gens.iter().any(|g| le(g, w))
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.iter().all(|&e| e == 0))
    }

    fn max_exps(&self) -> Vec<u16> {
        (0..self.nvars).map(|i| self.gens.iter().map(|g| g[i]).max().unwrap_or(0)).collect()
    }

    fn boxed(&self, bound: &[u16], f: &mut impl FnMut(&[u16])) {
        let mut w = vec![0u16; self.nvars];
        loop {
            f(&w);
            let mut i = 0;
            loop {
                if i == self.nvars {
                    return;
                }
                if w[i] < bound[i] {
                    w[i] += 1;
                    break;
                }
                w[i] = 0;
                i += 1;
            }
        }
    }

    /// `(J : w)`.
    pub fn colon(&self, w: &[u16]) -> Mono {
        Mono::new(self.nvars, self.gens.iter().map(|g| g.iter().zip(w).map(|(a, b)| a.saturating_sub(*b)).collect()).collect())
    }

    /// Associated primes of `k[z]/J` as variable masks; empty for `J = (1)`.
    pub fn ass(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        if self.is_unit() {
            return out;
        }
        if self.gens.is_empty() {
            out.insert(0);
            return out;
        }
        let e = self.max_exps();
        self.boxed(&e, &mut |w| {
            if self.contains(w) {
                return;
            }
            let c = self.colon(w);
            let mut mask = 0u64;
            let prime = c.gens.iter().all(|g| {
                let nz: Vec<usize> = (0..g.len()).filter(|&i| g[i] > 0).collect();
                if nz.len() == 1 && g[nz[0]] == 1 {
                    mask |= 1 << nz[0];
                    true
                } else {
                    false
                }
            });
            if prime {
                out.insert(mask);
            }
        });
        out
    }

    /// Minimal primes as masks; empty for `J = (1)`.
    pub fn minimal_primes(&self) -> BTreeSet<u64> {
        if self.is_unit() {
            return BTreeSet::new();
        }
        let covers: Vec<u64> = (0..1u64 << self.nvars)
            .filter(|&s| self.gens.iter().all(|g| (0..self.nvars).any(|i| s >> i & 1 == 1 && g[i] > 0)))
            .collect();
        covers.iter().copied().filter(|&s| !covers.iter().any(|&t| t != s && t & s == t)).collect()
    }

    /// Sets the variables outside `keep` to 1 and drops them.
    pub fn localize(&self, keep: u64) -> Mono {
        let idx: Vec<usize> = (0..self.nvars).filter(|&i| keep >> i & 1 == 1).collect();
        Mono::new(idx.len(), self.gens.iter().map(|g| idx.iter().map(|&i| g[i]).collect()).collect())
    }

    /// Length of `H^0_m(k[z]/J)` for the maximal monomial ideal `m`.
    pub fn h0_length(&self) -> usize {
        if self.is_unit() {
            return 0;
        }
        if self.nvars == 0 {
            return 1;
        }
        let e = self.max_exps();
        if e.contains(&0) {
            // Some variable is a nonzerodivisor.
            return 0;
        }
        let bound: Vec<u16> = e.iter().map(|x| x - 1).collect();
        let mut count = 0;
        self.boxed(&bound, &mut |w| {
            if self.contains(w) {
                return;
            }
            let torsion = (0..self.nvars).all(|i| {
                let mut v = w.to_vec();
                v[i] += e[i];
                self.contains(&v)
            });
            if torsion {
                count += 1;
            }
        });
        count
    }
}

/// The summands `R/J_{c,u}` of the slice `M_μ`, nonzero ones only.
pub fn slice_summands(m: &MonomialModule, mu: i64) -> Vec<Mono> {
    let mut out = Vec::new();
    for s in &m.summands {
        let d = mu - s.twist.fiber as i64;
        if d < 0 {
            continue;
        }
        for u in compositions(m.nfiber, d as u16) {
            let gens = s
                .gens
                .iter()
                .filter(|g| le(&g[m.nbase..], &u))
                .map(|g| g[..m.nbase].to_vec())
                .collect();
            let j = Mono::new(m.nbase, gens);
            if !j.is_unit() {
                out.push(j);
            }
        }
    }
    out
}

pub fn slice_nonzero(m: &MonomialModule, mu: i64) -> bool {
    !slice_summands(m, mu).is_empty()
}

pub fn slice_ass(m: &MonomialModule, mu: i64) -> BTreeSet<u64> {
    slice_summands(m, mu).iter().flat_map(|j| j.ass()).collect()
}

/// `{P ∩ R : P ∈ Ass_S(M)}` as masks of base variables.
pub fn contracted_ass(m: &MonomialModule) -> BTreeSet<u64> {
    let nv = m.nbase + m.nfiber;
    let base = (1u64 << m.nbase) - 1;
    m.summands.iter().flat_map(|s| Mono::new(nv, s.gens.clone()).ass()).map(|p| p & base).collect()
}

/// `cd_I(R/p)` for a squarefree monomial ideal `I` given by masks, `R/p` having at most two variables.
fn cd_small(supports: &[u64], free_vars: u64) -> Option<i64> {
    let mut kept: Vec<u64> = Vec::new();
    for &s in supports {
        if s & !free_vars != 0 {
            // The generator vanishes modulo p.
            continue;
        }
        if s == 0 {
            return None;
        }
        kept.push(s);
    }
    kept.sort();
    kept.dedup();
    let minimal: Vec<u64> = kept.iter().copied().filter(|&a| !kept.iter().any(|&b| b != a && b & a == b)).collect();
    match minimal.len() {
        0 => Some(0),
        1 => Some(1),
        2 if free_vars.count_ones() == 2 && minimal.iter().all(|g| g.count_ones() == 1) => Some(2),
        _ => panic!("cd oracle covers at most two free variables"),
    }
}

/// `cd_I(M_μ)` for a monomial ideal `I` of the base (given by exponent vectors), with at
/// most two base variables. `None` is `-∞`.
pub fn slice_cd(m: &MonomialModule, ideal: &[Vec<u16>], mu: i64) -> Option<i64> {
    assert!(m.nbase <= 2);
    let supports: Vec<u64> =
        ideal.iter().map(|g| (0..g.len()).filter(|&i| g[i] > 0).fold(0u64, |s, i| s | 1 << i)).collect();
    let all = (1u64 << m.nbase) - 1;
    let primes: BTreeSet<u64> = slice_summands(m, mu).iter().flat_map(|j| j.minimal_primes()).collect();
    let minimal: Vec<u64> = primes.iter().copied().filter(|&p| !primes.iter().any(|&q| q != p && q & p == q)).collect();
    minimal.iter().filter_map(|&p| cd_small(&supports, all & !p)).max()
}

/// `λ(H^0_{pR_p}((M_μ)_p))` for the monomial prime with mask `p`.
pub fn slice_length(m: &MonomialModule, p: u64, mu: i64) -> usize {
    slice_summands(m, mu).iter().map(|j| j.localize(p).h0_length()).sum()
}
