//! Exact coefficients: the rationals and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;

/// Coefficient field of a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// Prime field GF(p). `p` must be prime and fit comfortably in 31 bits.
    pub fn prime(p: u32) -> Result<Field, AlgebraError> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(AlgebraError::InvalidInput(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Prime(Fp::new(v.rem_euclid(p as i64) as u32, p)),
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor_u32(p);
                Scalar::Prime(Fp::new(r, p))
            }
        }
    }

    /// `num / den`; fails when the denominator vanishes in the field.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar, AlgebraError> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(AlgebraError::InvalidInput("division by zero in coefficient".into()));
        }
        Ok(&self.from_bigint(num) * &d.inv())
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

trait ModFloorU32 {
    fn mod_floor_u32(&self, p: u32) -> u32;
}

impl ModFloorU32 for BigInt {
    fn mod_floor_u32(&self, p: u32) -> u32 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u32().expect("residue fits u32")
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of GF(modulus), value in `0..modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    pub fn new(value: u32, modulus: u32) -> Fp {
        debug_assert!(value < modulus);
        Fp { value, modulus }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    fn pow(self, mut e: u64) -> Fp {
        let p = self.modulus as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp::new(acc as u32, self.modulus)
    }
}

/// A field element. Rationals are kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime(Fp),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime(x) => Field::Prime(x.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime(x) => x.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime(x) => x.value == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero scalar");
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime(x) => Scalar::Prime(x.pow(x.modulus as u64 - 2)),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Prime(_) => false,
        }
    }

    pub fn add_assign_ref(&mut self, rhs: &Scalar) {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a += b,
            (Scalar::Prime(a), Scalar::Prime(b)) => {
                assert_eq!(a.modulus, b.modulus, "mismatched prime fields");
                let s = a.value as u64 + b.value as u64;
                a.value = (s % a.modulus as u64) as u32;
            }
            _ => panic!("mismatched coefficient fields"),
        }
    }

    /// `self -= a * b`, the inner step of every elimination.
    pub fn sub_mul_assign(&mut self, a: &Scalar, b: &Scalar) {
        match (self, a, b) {
            (Scalar::Rational(s), Scalar::Rational(a), Scalar::Rational(b)) => *s -= a * b,
            (Scalar::Prime(s), Scalar::Prime(a), Scalar::Prime(b)) => {
                let p = s.modulus as u64;
                let prod = a.value as u64 * b.value as u64 % p;
                s.value = ((s.value as u64 + p - prod) % p) as u32;
            }
            _ => panic!("mismatched coefficient fields"),
        }
    }

    /// Integer value for small rationals with denominator one.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(q) if q.is_integer() => q.to_integer().to_i64(),
            Scalar::Rational(_) => None,
            Scalar::Prime(x) => Some(x.value as i64),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Prime(x) => write!(f, "{}", x.value),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $rat:expr, $fp:expr) => {
        impl std::ops::$tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational($rat(a, b)),
                    (Scalar::Prime(a), Scalar::Prime(b)) => {
                        assert_eq!(a.modulus, b.modulus, "mismatched prime fields");
                        let p = a.modulus as u64;
                        Scalar::Prime(Fp::new($fp(a.value as u64, b.value as u64, p) as u32, a.modulus))
                    }
                    _ => panic!("mismatched coefficient fields"),
                }
            }
        }
    };
}

binop!(Add, add, |a: &BigRational, b: &BigRational| a + b, |a, b, p| (a + b) % p);
binop!(Sub, sub, |a: &BigRational, b: &BigRational| a - b, |a, b, p| (a + p - b) % p);
binop!(Mul, mul, |a: &BigRational, b: &BigRational| a * b, |a: u64, b: u64, p| a * b % p);

impl std::ops::Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime(a) => Scalar::Prime(Fp::new((a.modulus - a.value) % a.modulus, a.modulus)),
        }
    }
}
