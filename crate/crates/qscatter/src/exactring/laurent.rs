//! Sparse Laurent polynomials in s = q^{1/2}.
//!
//! Exponents may be half-integral; the map key is the exponent doubled,
//! so key k stands for s^{k/2}. All arithmetic produced by the scattering
//! pipeline stays on even keys (integer powers of s), but the
//! representation keeps the general case available.

use super::rat::Rat;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Laurent polynomial in s, sparse, no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SLaurent {
    /// key = exponent of s, doubled (key k <-> s^{k/2})
    terms: BTreeMap<i64, Rat>,
}

impl SLaurent {
    pub fn zero() -> Self {
        SLaurent::default()
    }

    pub fn one() -> Self {
        SLaurent::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        SLaurent { terms }
    }

    /// c * s^e for an integer exponent e.
    pub fn monomial(c: Rat, e: i64) -> Self {
        Self::monomial_half(c, 2 * e)
    }

    /// c * s^{k/2} with the scaled key given directly.
    pub fn monomial_half(c: Rat, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        SLaurent { terms }
    }

    /// s^e.
    pub fn s_pow(e: i64) -> Self {
        Self::monomial(Rat::one(), e)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let mut f = SLaurent::zero();
        for (k, c) in terms {
            f.add_term(k, c);
        }
        f
    }

    /// Adds c * s^{k/2} in place.
    pub fn add_term(&mut self, k: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff_half(0).is_one()
    }

    /// Coefficient of s^{k/2}.
    pub fn coeff_half(&self, k: i64) -> Rat {
        self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of s^e.
    pub fn coeff(&self, e: i64) -> Rat {
        self.coeff_half(2 * e)
    }

    /// Iterates (scaled key, coefficient) pairs in increasing key order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Lowest scaled key; None for the zero polynomial.
    pub fn min_key(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest scaled key; None for the zero polynomial.
    pub fn max_key(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.max_key()
            .map(|k| self.coeff_half(k))
            .unwrap_or_else(Rat::zero)
    }

    /// Multiplies by s^{k/2}.
    pub fn shift(&self, k: i64) -> Self {
        SLaurent {
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return SLaurent::zero();
        }
        SLaurent {
            terms: self.terms.iter().map(|(&e, x)| (e, x * c)).collect(),
        }
    }

    /// Substitutes s -> s^l (multiplies every exponent by l).
    pub fn substitute_power(&self, l: i64) -> Self {
        assert!(l >= 1);
        SLaurent {
            terms: self.terms.iter().map(|(&e, c)| (e * l, c.clone())).collect(),
        }
    }

    /// Substitutes s -> s^{-1}.
    pub fn invert_s(&self) -> Self {
        SLaurent {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Invariance under s <-> s^{-1}.
    pub fn is_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(&e, c)| self.coeff_half(-e) == *c)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Evaluates at s = 1 (sum of coefficients).
    pub fn eval_one(&self) -> Rat {
        let mut acc = Rat::zero();
        for c in self.terms.values() {
            acc += c.clone();
        }
        acc
    }

    /// Content: gcd of the numerators over the lcm of denominators, signed so
    /// that dividing by it leaves integer-primitive coefficients with positive
    /// leading coefficient.
    pub fn content(&self) -> Rat {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::{One, Zero};
        if self.is_zero() {
            return Rat::one();
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&(c.numer() * &den_lcm / c.denom()));
        }
        let mut content = Rat::new(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        content
    }

    /// Exact division in the Laurent ring; None if the remainder is nonzero.
    ///
    /// Works by shifting both operands to lowest key 0 and running ordinary
    /// polynomial division; units s^k never obstruct divisibility.
    pub fn checked_div(&self, rhs: &SLaurent) -> Option<SLaurent> {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(SLaurent::zero());
        }
        let self_min = self.min_key().unwrap();
        let rhs_min = rhs.min_key().unwrap();
        let mut rem = self.shift(-self_min);
        let den = rhs.shift(-rhs_min);
        let den_deg = den.max_key().unwrap();
        let den_lc = den.leading_coeff();
        let mut quot = SLaurent::zero();
        while !rem.is_zero() {
            let deg = rem.max_key().unwrap();
            if deg < den_deg || rem.min_key().unwrap() < 0 {
                return None;
            }
            let k = deg - den_deg;
            let c = &rem.coeff_half(deg) / &den_lc;
            quot.add_term(k, c.clone());
            rem = &rem - &den.shift(k).scale(&c);
        }
        Some(quot.shift(self_min - rhs_min))
    }
}

impl Add for &SLaurent {
    type Output = SLaurent;
    fn add(self, rhs: &SLaurent) -> SLaurent {
        let mut out = self.clone();
        for (k, c) in rhs.iter() {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &SLaurent {
    type Output = SLaurent;
    fn sub(self, rhs: &SLaurent) -> SLaurent {
        let mut out = self.clone();
        for (k, c) in rhs.iter() {
            out.add_term(k, -c);
        }
        out
    }
}

impl Mul for &SLaurent {
    type Output = SLaurent;
    fn mul(self, rhs: &SLaurent) -> SLaurent {
        let mut out = SLaurent::zero();
        for (k1, c1) in self.iter() {
            for (k2, c2) in rhs.iter() {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &SLaurent {
    type Output = SLaurent;
    fn neg(self) -> SLaurent {
        SLaurent {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl fmt::Display for SLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest power first
        for (&k, c) in self.terms.iter().rev() {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{c}")?;
            } else {
                let e = if k % 2 == 0 {
                    format!("{}", k / 2)
                } else {
                    format!("{k}/2")
                };
                if c.is_one() {
                    write!(f, "s^{e}")?;
                } else {
                    write!(f, "{c}*s^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SLaurent {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // list of [scaled exponent, "a/b"]
        let v: Vec<(i64, Rat)> = self.terms.iter().map(|(&k, c)| (k, c.clone())).collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SLaurent {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v: Vec<(i64, Rat)> = Vec::deserialize(deserializer)?;
        Ok(SLaurent::from_terms(v))
    }
}
