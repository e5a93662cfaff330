//! Arbitrary-precision rationals, Gaussian rationals and small
//! number-theoretic helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Exact rational number, always reduced, denominator > 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        Rat(self.0.recip())
    }

    /// Interprets the rational as an integer; panics on non-integers.
    pub fn to_bigint(&self) -> BigInt {
        assert!(self.is_integer(), "not an integer: {self}");
        self.0.to_integer()
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num = BigInt::from_str(n.trim()).map_err(|e| e.to_string())?;
        let den = BigInt::from_str(d.trim()).map_err(|e| e.to_string())?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rat::new(num, den))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rat::from_str(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($trait:ident, $meth:ident, $t:ty) => {
        impl $trait for &$t {
            type Output = $t;
            fn $meth(self, rhs: &$t) -> $t {
                <$t>::$meth(self.clone(), rhs.clone())
            }
        }
        impl $trait for $t {
            type Output = $t;
            fn $meth(self, rhs: $t) -> $t {
                <$t>::$meth(self, rhs)
            }
        }
    };
}

impl Rat {
    fn add(self, rhs: Rat) -> Rat {
        Rat(self.0 + rhs.0)
    }
    fn sub(self, rhs: Rat) -> Rat {
        Rat(self.0 - rhs.0)
    }
    fn mul(self, rhs: Rat) -> Rat {
        Rat(self.0 * rhs.0)
    }
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

binop!(Add, add, Rat);
binop!(Sub, sub, Rat);
binop!(Mul, mul, Rat);
binop!(Div, div, Rat);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0.clone())
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

/// Gaussian rational a + b·i.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        GaussRat::new(Rat::one(), Rat::zero())
    }

    pub fn i() -> Self {
        GaussRat::new(Rat::zero(), Rat::one())
    }

    pub fn real(re: Rat) -> Self {
        GaussRat::new(re, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// i^k for any integer k.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussRat::one(),
            1 => GaussRat::i(),
            2 => GaussRat::new(-Rat::one(), Rat::zero()),
            _ => GaussRat::new(Rat::zero(), -Rat::one()),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        GaussRat::new(&self.re * c, &self.im * c)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}*i", self.im)
        } else {
            write!(f, "{} + {}*i", self.re, self.im)
        }
    }
}

impl GaussRat {
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat::new(self.re + rhs.re, self.im + rhs.im)
    }
    fn sub(self, rhs: GaussRat) -> GaussRat {
        GaussRat::new(self.re - rhs.re, self.im - rhs.im)
    }
    fn mul(self, rhs: GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
    fn div(self, rhs: GaussRat) -> GaussRat {
        let norm = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        assert!(!norm.is_zero(), "division by zero");
        let conj = GaussRat::new(rhs.re, -rhs.im);
        let prod = self.mul(conj);
        GaussRat::new(prod.re / norm.clone(), prod.im / norm)
    }
}

binop!(Add, add, GaussRat);
binop!(Sub, sub, GaussRat);
binop!(Mul, mul, GaussRat);
binop!(Div, div, GaussRat);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

/// Möbius function via trial factorization.
pub fn mobius(l: u64) -> i64 {
    assert!(l >= 1, "mobius requires l >= 1");
    let mut n = l;
    let mut factors = 0;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            factors += 1;
        }
        d += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = Vec::new();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            ds.push(d);
        }
    }
    ds
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs()) as i64
}
