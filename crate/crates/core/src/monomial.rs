//! Exponent vectors and monomial orders.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Exponent vector over all ring variables, base variables first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Monomial {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn degree_in(&self, range: std::ops::Range<usize>) -> i64 {
        self.0[range].iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Product. Exponent overflow is a hard error.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("monomial exponent overflow"))
                .collect(),
        )
    }

    pub fn pow(&self, e: u16) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|a| a.checked_mul(e).expect("monomial exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self | other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a > b {
                return None;
            }
            out.push(b - a);
        }
        Some(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    pub fn set(&mut self, i: usize, e: u16) {
        self.0[i] = e;
    }

    /// Restriction to a contiguous block of variables.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Monomial {
        Monomial(SmallVec::from_slice(&self.0[range]))
    }

    /// Concatenation `(self, other)` of exponent vectors.
    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Monomial(v)
    }
}

/// Monomial order on a ring with `nbase` base variables followed by fiber variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
    /// Fiber block (degrevlex) dominates, ties broken by base block (degrevlex).
    Block,
}

impl MonomialOrder {
    pub fn is_degree_compatible(self) -> bool {
        matches!(self, MonomialOrder::DegRevLex)
    }

    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::DegRevLex => "degrevlex",
            MonomialOrder::Lex => "lex",
            MonomialOrder::Block => "block",
        }
    }

    pub fn parse(s: &str) -> Option<MonomialOrder> {
        match s {
            "degrevlex" | "grevlex" => Some(MonomialOrder::DegRevLex),
            "lex" => Some(MonomialOrder::Lex),
            "block" => Some(MonomialOrder::Block),
            _ => None,
        }
    }

    /// Greater means leading.
    pub fn cmp(self, nbase: usize, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => degrevlex(a.exps(), b.exps()),
            MonomialOrder::Lex => a.exps().cmp(b.exps()),
            MonomialOrder::Block => degrevlex(&a.exps()[nbase..], &b.exps()[nbase..])
                .then_with(|| degrevlex(&a.exps()[..nbase], &b.exps()[..nbase])),
        }
    }
}

fn degrevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
