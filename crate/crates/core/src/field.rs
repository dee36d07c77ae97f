//! Exact coefficient fields: the rationals and prime fields.
//!
//! All arithmetic in the engine is exact; no floating point appears anywhere.
//! Rational coefficients are arbitrary-precision reduced fractions; prime
//! field elements are integers mod p with inverses by Fermat's little theorem.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// The base field of a graded ring: ℚ or 𝔽_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u32),
}

/// A field element. The variant must match the owning [`Field`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rat(BigRational),
    Fp(u64),
}

fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    let n = n as u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// Construct a field, validating that the characteristic is 0 or a prime < 2^31.
    pub fn new(characteristic: u32) -> Result<Field> {
        if characteristic == 0 {
            Ok(Field::Rationals)
        } else if characteristic < (1 << 31) && is_prime_u32(characteristic) {
            Ok(Field::Prime(characteristic))
        } else {
            Err(Error::InvalidRing(format!(
                "characteristic {characteristic} is neither 0 nor a prime below 2^31"
            )))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Field::Rationals => Coeff::Rat(BigRational::zero()),
            Field::Prime(_) => Coeff::Fp(0),
        }
    }

    pub fn one(&self) -> Coeff {
        match self {
            Field::Rationals => Coeff::Rat(BigRational::one()),
            Field::Prime(_) => Coeff::Fp(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        match self {
            Field::Rationals => Coeff::Rat(BigRational::from(BigInt::from(n))),
            Field::Prime(p) => {
                let p = *p as i128;
                Coeff::Fp(((n as i128 % p + p) % p) as u64)
            }
        }
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rat(r) => r.is_zero(),
            Coeff::Fp(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Rationals, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (Field::Prime(p), Coeff::Fp(x), Coeff::Fp(y)) => Coeff::Fp((x + y) % *p as u64),
            _ => panic!("coefficient does not belong to this field"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Rationals, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x - y),
            (Field::Prime(p), Coeff::Fp(x), Coeff::Fp(y)) => {
                let p = *p as u64;
                Coeff::Fp((x + p - y) % p)
            }
            _ => panic!("coefficient does not belong to this field"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Field::Rationals, Coeff::Rat(x)) => Coeff::Rat(-x),
            (Field::Prime(p), Coeff::Fp(x)) => Coeff::Fp(if *x == 0 { 0 } else { *p as u64 - x }),
            _ => panic!("coefficient does not belong to this field"),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Rationals, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (Field::Prime(p), Coeff::Fp(x), Coeff::Fp(y)) => {
                Coeff::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("coefficient does not belong to this field"),
        }
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Field::Rationals, Coeff::Rat(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Coeff::Rat(x.recip())
            }
            (Field::Prime(p), Coeff::Fp(x)) => {
                assert!(*x != 0, "inverse of zero");
                // Fermat: x^(p-2) mod p
                let p = *p as u64;
                let mut base = *x % p;
                let mut exp = p - 2;
                let mut acc: u64 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = ((acc as u128 * base as u128) % p as u128) as u64;
                    }
                    base = ((base as u128 * base as u128) % p as u128) as u64;
                    exp >>= 1;
                }
                Coeff::Fp(acc)
            }
            _ => panic!("coefficient does not belong to this field"),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.mul(a, &self.inv(b))
    }

    /// Render a coefficient; rationals print as `n` or `n/d`.
    pub fn format(&self, a: &Coeff) -> String {
        match a {
            Coeff::Rat(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Coeff::Fp(v) => format!("{v}"),
        }
    }

    /// Is this coefficient a (positive-sign) one?
    pub fn is_one(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rat(r) => r.is_one(),
            Coeff::Fp(v) => *v == 1,
        }
    }

    /// True when the rational is negative (always false over 𝔽_p).
    pub fn is_negative(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rat(r) => r.is_negative(),
            Coeff::Fp(_) => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}
