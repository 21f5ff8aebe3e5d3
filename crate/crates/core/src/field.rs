//! Exact coefficient fields: the rationals and prime fields F_p.
//!
//! Every element carries enough information to perform arithmetic without an
//! ambient ring object, but constructors-from-nothing (zero, one, literals)
//! take a copyable [`Field::Ctx`] so that containers can be built from a
//! field choice made at runtime.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exactly computable field. All operations are total except `inv` on
/// zero; equality is decidable and structural.
pub trait Field:
    Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static
{
    /// Runtime data needed to mint elements (the prime for F_p, nothing for Q).
    type Ctx: Copy + PartialEq + Eq + Hash + Debug + Send + Sync + 'static;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn from_i64(ctx: Self::Ctx, v: i64) -> Self;
    /// Parse an integer or `a/b` literal.
    fn parse(ctx: Self::Ctx, text: &str) -> Result<Self>;

    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one(self.ctx())
    }

    /// Split into (is_negative, absolute value) for printing. Fields without
    /// a preferred sign (F_p) return (false, self).
    fn sign_split(&self) -> (bool, Self) {
        (false, self.clone())
    }
}

/// Arbitrary-precision rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

impl Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Field for Rat {
    type Ctx = ();

    fn ctx(&self) -> Self::Ctx {}

    fn zero(_ctx: ()) -> Self {
        Rat(BigRational::zero())
    }

    fn one(_ctx: ()) -> Self {
        Rat(BigRational::one())
    }

    fn from_i64(_ctx: (), v: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }

    fn parse(_ctx: (), text: &str) -> Result<Self> {
        parse_big_rational(text).map(Rat)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        Rat(&self.0 + &rhs.0)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Rat(&self.0 - &rhs.0)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Rat(&self.0 * &rhs.0)
    }

    fn neg(&self) -> Self {
        Rat(-&self.0)
    }

    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    fn sign_split(&self) -> (bool, Self) {
        if self.0.is_negative() {
            (true, Rat(-&self.0))
        } else {
            (false, self.clone())
        }
    }
}

pub fn parse_big_rational(text: &str) -> Result<BigRational> {
    let bad = |msg: &str| Error::Parse {
        position: 0,
        message: format!("{msg}: {text:?}"),
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("bad integer"))?;
    let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

/// The prime modulus for an [`Fp`] element.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of the prime field F_p, stored as the least residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    prime: Prime,
}

impl Fp {
    pub fn new(prime: Prime, v: i64) -> Self {
        let p = prime.get() as i64;
        let mut r = v % p;
        if r < 0 {
            r += p;
        }
        Fp {
            value: r as u64,
            prime,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    fn check(&self, rhs: &Self) -> Prime {
        assert_eq!(self.prime, rhs.prime, "mixed prime fields");
        self.prime
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

impl Field for Fp {
    type Ctx = Prime;

    fn ctx(&self) -> Prime {
        self.prime
    }

    fn zero(ctx: Prime) -> Self {
        Fp {
            value: 0,
            prime: ctx,
        }
    }

    fn one(ctx: Prime) -> Self {
        Fp {
            value: 1 % ctx.get(),
            prime: ctx,
        }
    }

    fn from_i64(ctx: Prime, v: i64) -> Self {
        Fp::new(ctx, v)
    }

    fn parse(ctx: Prime, text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            position: 0,
            message: format!("{msg}: {text:?}"),
        };
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text.trim(), "1"),
        };
        let num: i64 = num.parse().map_err(|_| bad("bad integer"))?;
        let den: i64 = den.parse().map_err(|_| bad("bad denominator"))?;
        let den = Fp::new(ctx, den);
        let inv = den.inv().ok_or(Error::DivisionByZero)?;
        Ok(Fp::new(ctx, num).mul(&inv))
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        let p = self.check(rhs).get();
        let mut v = self.value + rhs.value;
        if v >= p {
            v -= p;
        }
        Fp {
            value: v,
            prime: self.prime,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        let p = self.check(rhs).get();
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + p - rhs.value
        };
        Fp {
            value: v,
            prime: self.prime,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let p = self.check(rhs).get();
        Fp {
            value: (self.value as u128 * rhs.value as u128 % p as u128) as u64,
            prime: self.prime,
        }
    }

    fn neg(&self) -> Self {
        let p = self.prime.get();
        Fp {
            value: if self.value == 0 { 0 } else { p - self.value },
            prime: self.prime,
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        let p = self.prime.get();
        Some(Fp {
            value: pow_mod(self.value, p - 2, p),
            prime: self.prime,
        })
    }
}
