//! Prime fields `F_p` and the coefficient modulus used by Magnus coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// A prime `p`, checked at construction. Scalars of `F_p` are stored as
/// canonical representatives in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if is_prime(p as u64) {
            Ok(Prime(p))
        } else {
            Err(FieldError::NotPrime(p as u64))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    pub fn reduce_big(self, x: &BigInt) -> u32 {
        let p = BigInt::from(self.0);
        let r = ((x % &p) + &p) % &p;
        r.to_u32().expect("residue fits in u32")
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Multiplicative inverse by Fermat. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.0), "zero has no inverse in F_{}", self.0);
        self.pow(a, self.0 as u64 - 2)
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Signed representative in `(-p/2, p/2]`, handy for display.
    pub fn signed(self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.0 as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

impl TryFrom<u32> for Prime {
    type Error = FieldError;
    fn try_from(p: u32) -> Result<Self, Self::Error> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Coefficient ring for Magnus coefficients: the integers, or `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulus {
    Integer,
    Prime(Prime),
}

impl Modulus {
    /// `0` means integer arithmetic; anything else must be prime.
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p == 0 {
            Ok(Modulus::Integer)
        } else {
            Prime::new(p).map(Modulus::Prime)
        }
    }

    pub fn prime(self) -> Option<Prime> {
        match self {
            Modulus::Integer => None,
            Modulus::Prime(p) => Some(p),
        }
    }

    /// Canonical form of an integer in this ring: unchanged over `Z`,
    /// the representative in `[0, p)` over `F_p`.
    pub fn canonical(self, x: BigInt) -> BigInt {
        match self {
            Modulus::Integer => x,
            Modulus::Prime(p) => BigInt::from(p.reduce_big(&x)),
        }
    }

    pub fn is_zero(self, x: &BigInt) -> bool {
        match self {
            Modulus::Integer => x.abs() == BigInt::from(0),
            Modulus::Prime(p) => p.reduce_big(x) == 0,
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Integer => write!(f, "0"),
            Modulus::Prime(p) => write!(f, "{p}"),
        }
    }
}
