//! Rational functions in s = q^{1/2} with exact arithmetic.
//!
//! Canonical form: numerator and denominator coprime, denominator shifted to
//! lowest exponent 0, integer-primitive with positive leading coefficient.
//! Equality is then structural.

use super::laurent::SLaurent;
use super::rat::Rat;
use crate::Error;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Element of Q(s), reduced fraction of Laurent polynomials.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFuncQ {
    num: SLaurent,
    den: SLaurent,
}

impl Default for RatFuncQ {
    fn default() -> Self {
        RatFuncQ::zero()
    }
}

impl RatFuncQ {
    pub fn new(num: SLaurent, den: SLaurent) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut f = RatFuncQ { num, den };
        f.normalize();
        f
    }

    pub fn zero() -> Self {
        RatFuncQ {
            num: SLaurent::zero(),
            den: SLaurent::one(),
        }
    }

    pub fn one() -> Self {
        RatFuncQ {
            num: SLaurent::one(),
            den: SLaurent::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFuncQ {
            num: SLaurent::constant(c),
            den: SLaurent::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rat::from_int(n))
    }

    pub fn from_laurent(f: SLaurent) -> Self {
        RatFuncQ {
            num: f,
            den: SLaurent::one(),
        }
    }

    /// s^e as a rational function.
    pub fn s_pow(e: i64) -> Self {
        Self::from_laurent(SLaurent::s_pow(e))
    }

    /// s^l - s^{-l}, the recurring quantum denominator.
    pub fn s_pow_minus_inv(l: i64) -> SLaurent {
        SLaurent::from_terms([(2 * l, Rat::one()), (-2 * l, -Rat::one())])
    }

    pub fn num(&self) -> &SLaurent {
        &self.num
    }

    pub fn den(&self) -> &SLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is the unit polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// The numerator as a Laurent polynomial, provided den = 1.
    pub fn as_laurent(&self) -> Option<&SLaurent> {
        if self.is_laurent() {
            Some(&self.num)
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = SLaurent::one();
            return;
        }
        let g = laurent_gcd(&self.num, &self.den);
        if !g.is_one() {
            self.num = self.num.checked_div(&g).expect("gcd divides num");
            self.den = self.den.checked_div(&g).expect("gcd divides den");
        }
        // move the denominator's s-power into the numerator
        let shift = self.den.min_key().expect("den nonzero");
        if shift != 0 {
            self.den = self.den.shift(-shift);
            self.num = self.num.shift(-shift);
        }
        // integer-primitive denominator with positive leading coefficient
        let content = self.den.content();
        if !content.is_one() {
            let inv = content.recip();
            self.den = self.den.scale(&inv);
            self.num = self.num.scale(&inv);
        }
    }

    pub fn add(&self, rhs: &RatFuncQ) -> RatFuncQ {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let g = laurent_gcd(&self.den, &rhs.den);
        let da = self.den.checked_div(&g).unwrap();
        let db = rhs.den.checked_div(&g).unwrap();
        RatFuncQ::new(&(&self.num * &db) + &(&rhs.num * &da), &self.den * &db)
    }

    pub fn sub(&self, rhs: &RatFuncQ) -> RatFuncQ {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RatFuncQ {
        RatFuncQ {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &RatFuncQ) -> RatFuncQ {
        if self.is_zero() || rhs.is_zero() {
            return RatFuncQ::zero();
        }
        // cross-reduce before multiplying to keep degrees small
        let g1 = laurent_gcd(&self.num, &rhs.den);
        let g2 = laurent_gcd(&rhs.num, &self.den);
        let n1 = self.num.checked_div(&g1).unwrap();
        let d2 = rhs.den.checked_div(&g1).unwrap();
        let n2 = rhs.num.checked_div(&g2).unwrap();
        let d1 = self.den.checked_div(&g2).unwrap();
        RatFuncQ::new(&n1 * &n2, &d1 * &d2)
    }

    pub fn div(&self, rhs: &RatFuncQ) -> Result<RatFuncQ, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul(&RatFuncQ {
            num: rhs.den.clone(),
            den: rhs.num.clone(),
        }
        .normalized()))
    }

    fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    pub fn scale(&self, c: &Rat) -> RatFuncQ {
        if c.is_zero() {
            return RatFuncQ::zero();
        }
        RatFuncQ {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<RatFuncQ, Error> {
        RatFuncQ::one().div(self)
    }

    pub fn pow(&self, k: u32) -> RatFuncQ {
        let mut acc = RatFuncQ::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes s -> s^l (q^{1/2} -> q^{l/2}).
    pub fn substitute_power(&self, l: i64) -> RatFuncQ {
        assert!(l >= 1, "substitute_power requires l >= 1");
        RatFuncQ {
            num: self.num.substitute_power(l),
            den: self.den.substitute_power(l),
        }
        .normalized()
    }

    /// Substitutes s -> s^{-1}.
    pub fn invert_s(&self) -> RatFuncQ {
        RatFuncQ {
            num: self.num.invert_s(),
            den: self.den.invert_s(),
        }
        .normalized()
    }

    /// Invariance under s <-> s^{-1}.
    pub fn is_symmetric(&self) -> bool {
        *self == self.invert_s()
    }

    /// Laurent / integrality / symmetry verdict.
    pub fn integrality_symmetry(&self) -> IntegralityVerdict {
        let is_laurent = self.is_laurent();
        IntegralityVerdict {
            is_laurent,
            integer_coeffs: is_laurent && self.num.has_integer_coeffs(),
            symmetric: self.is_symmetric(),
        }
    }

    /// Sum of a finite family.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a RatFuncQ>) -> RatFuncQ {
        let mut acc = RatFuncQ::zero();
        for f in items {
            acc = acc.add(f);
        }
        acc
    }
}

/// Outcome of the Laurent/integer/symmetric audit on a rational function.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IntegralityVerdict {
    pub is_laurent: bool,
    pub integer_coeffs: bool,
    pub symmetric: bool,
}

impl IntegralityVerdict {
    pub fn passes(&self) -> bool {
        self.is_laurent && self.integer_coeffs && self.symmetric
    }
}

impl fmt::Display for IntegralityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "laurent={} integer={} symmetric={}",
            self.is_laurent, self.integer_coeffs, self.symmetric
        )
    }
}

/// Monic-normalized gcd of two Laurent polynomials, computed by the Euclidean
/// algorithm after clearing s-powers. The result is integer-primitive with
/// positive leading coefficient; s-power units are dropped.
pub fn laurent_gcd(a: &SLaurent, b: &SLaurent) -> SLaurent {
    if a.is_zero() {
        return normalize_poly(b);
    }
    if b.is_zero() {
        return normalize_poly(a);
    }
    let mut f = a.shift(-a.min_key().unwrap());
    let mut g = b.shift(-b.min_key().unwrap());
    while !g.is_zero() {
        let r = poly_rem(&f, &g);
        f = g;
        g = r;
    }
    normalize_poly(&f)
}

fn normalize_poly(f: &SLaurent) -> SLaurent {
    if f.is_zero() {
        return SLaurent::zero();
    }
    let shifted = f.shift(-f.min_key().unwrap());
    let c = shifted.content();
    shifted.scale(&c.recip())
}

/// Remainder of polynomial division (operands with min key 0).
fn poly_rem(f: &SLaurent, g: &SLaurent) -> SLaurent {
    let mut rem = f.clone();
    let g_deg = g.max_key().unwrap();
    let g_lc = g.leading_coeff();
    while !rem.is_zero() && rem.max_key().unwrap() >= g_deg {
        let deg = rem.max_key().unwrap();
        let c = &rem.coeff_half(deg) / &g_lc;
        rem = &rem - &g.shift(deg - g_deg).scale(&c);
    }
    // clear the s-power so the next round starts at key 0
    if let Some(min) = rem.min_key() {
        rem = rem.shift(-min);
    }
    rem
}

impl fmt::Display for RatFuncQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFuncQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &RatFuncQ {
    type Output = RatFuncQ;
    fn add(self, rhs: &RatFuncQ) -> RatFuncQ {
        RatFuncQ::add(self, rhs)
    }
}

impl Sub for &RatFuncQ {
    type Output = RatFuncQ;
    fn sub(self, rhs: &RatFuncQ) -> RatFuncQ {
        RatFuncQ::sub(self, rhs)
    }
}

impl Mul for &RatFuncQ {
    type Output = RatFuncQ;
    fn mul(self, rhs: &RatFuncQ) -> RatFuncQ {
        RatFuncQ::mul(self, rhs)
    }
}

impl Div for &RatFuncQ {
    type Output = RatFuncQ;
    fn div(self, rhs: &RatFuncQ) -> RatFuncQ {
        RatFuncQ::div(self, rhs).expect("division by zero")
    }
}

impl Neg for &RatFuncQ {
    type Output = RatFuncQ;
    fn neg(self) -> RatFuncQ {
        RatFuncQ::neg(self)
    }
}

/// Quantum integer [k]_q = (s^k - s^{-k})/(s - s^{-1}), a symmetric Laurent
/// polynomial with unit coefficients.
pub fn quantum_integer(k: u32) -> SLaurent {
    assert!(k >= 1, "quantum_integer requires k >= 1");
    let mut f = SLaurent::zero();
    let k = k as i64;
    let mut e = 1 - k;
    while e < k {
        f.add_term(2 * e, Rat::one());
        e += 2;
    }
    f
}

/// Quantum integer of a possibly negative argument: [-k]_q = -[k]_q, [0]_q = 0.
pub fn quantum_integer_signed(k: i64) -> SLaurent {
    match k {
        0 => SLaurent::zero(),
        k if k > 0 => quantum_integer(k as u32),
        k => -&quantum_integer((-k) as u32),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_over_sms() -> RatFuncQ {
        RatFuncQ::new(SLaurent::one(), RatFuncQ::s_pow_minus_inv(1))
    }

    /// Independent long-division oracle used to freeze expected values.
    fn long_division(num: &SLaurent, den: &SLaurent) -> Option<SLaurent> {
        // schoolbook division on dense coefficient vectors
        let nmin = num.min_key()?;
        let dmin = den.min_key()?;
        let n: Vec<Rat> = (0..=(num.max_key()? - nmin))
            .map(|k| num.coeff_half(k + nmin))
            .collect();
        let d: Vec<Rat> = (0..=(den.max_key()? - dmin))
            .map(|k| den.coeff_half(k + dmin))
            .collect();
        let mut rem = n;
        let dd = d.len() - 1;
        if rem.len() < d.len() {
            return None;
        }
        let mut q = vec![Rat::zero(); rem.len() - d.len() + 1];
        for i in (0..q.len()).rev() {
            let c = &rem[i + dd] / &d[dd];
            q[i] = c.clone();
            for (j, dj) in d.iter().enumerate() {
                let delta = &c * dj;
                rem[i + j] = rem[i + j].clone() - delta;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(SLaurent::from_terms(
            q.into_iter().enumerate().map(|(i, c)| (i as i64 + nmin - dmin, c)),
        ))
    }

    #[test]
    fn add_inverse_pair_is_zero() {
        let f = one_over_sms();
        assert!(f.add(&f.neg()).is_zero());
    }

    #[test]
    fn mul_s_by_s_inverse() {
        let prod = &RatFuncQ::s_pow(1) * &RatFuncQ::s_pow(-1);
        assert!(prod.is_one());
    }

    #[test]
    fn div_by_quantum_denominator() {
        // (s^2 - s^-2)/(s - s^-1) = s + s^-1, checked against long division
        let num = RatFuncQ::from_laurent(RatFuncQ::s_pow_minus_inv(2));
        let den = RatFuncQ::from_laurent(RatFuncQ::s_pow_minus_inv(1));
        let q = num.div(&den).unwrap();
        let oracle = long_division(&RatFuncQ::s_pow_minus_inv(2), &RatFuncQ::s_pow_minus_inv(1))
            .unwrap();
        assert_eq!(q, RatFuncQ::from_laurent(oracle.clone()));
        assert_eq!(oracle, quantum_integer(2));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            RatFuncQ::one().div(&RatFuncQ::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn canonical_form_is_structural_equality() {
        // (s^2-1)/(s) == s - s^-1 as rational functions
        let a = RatFuncQ::new(
            SLaurent::from_terms([(4, Rat::one()), (0, -Rat::one())]),
            SLaurent::s_pow(1),
        );
        let b = RatFuncQ::from_laurent(RatFuncQ::s_pow_minus_inv(1));
        assert_eq!(a, b);
        assert!(a.is_laurent());
        // denominator normalization: 2/(2s^2-2) reduces to 1/(s^2-1)
        let c = RatFuncQ::new(
            SLaurent::constant(Rat::from_int(2)),
            SLaurent::from_terms([(4, Rat::from_int(2)), (0, Rat::from_int(-2))]),
        );
        assert_eq!(c.den().coeff(0), Rat::from_int(-1));
        assert_eq!(c.den().min_key(), Some(0));
        assert_eq!(c.den().leading_coeff(), Rat::one());
    }

    #[test]
    fn quantum_integer_values() {
        assert_eq!(quantum_integer(1), SLaurent::one());
        assert_eq!(
            quantum_integer(2),
            SLaurent::from_terms([(2, Rat::one()), (-2, Rat::one())])
        );
        // k=3 against the long-division oracle
        let oracle =
            long_division(&RatFuncQ::s_pow_minus_inv(3), &RatFuncQ::s_pow_minus_inv(1)).unwrap();
        assert_eq!(quantum_integer(3), oracle);
        for k in 1..=8u32 {
            let qi = quantum_integer(k);
            assert!(qi.is_symmetric());
            assert_eq!(qi.eval_one(), Rat::from_int(k as i64));
        }
    }

    #[test]
    fn substitute_power_examples() {
        let s = RatFuncQ::s_pow(1);
        assert_eq!(s.substitute_power(2), RatFuncQ::s_pow(2));
        let f = one_over_sms();
        let expect = RatFuncQ::new(SLaurent::one(), RatFuncQ::s_pow_minus_inv(2));
        assert_eq!(f.substitute_power(2), expect);
        // substitution oracle: [2]_q(s -> s^3) = s^3 + s^-3
        let g = RatFuncQ::from_laurent(quantum_integer(2)).substitute_power(3);
        assert_eq!(
            g,
            RatFuncQ::from_laurent(SLaurent::from_terms([(6, Rat::one()), (-6, Rat::one())]))
        );
    }

    #[test]
    fn integrality_symmetry_verdicts() {
        let v = RatFuncQ::from_laurent(quantum_integer(2)).integrality_symmetry();
        assert!(v.is_laurent && v.integer_coeffs && v.symmetric);
        let v = one_over_sms().integrality_symmetry();
        assert!(!v.is_laurent);
        let half = RatFuncQ::from_laurent(quantum_integer(2)).scale(&Rat::from_frac(1, 2));
        let v = half.integrality_symmetry();
        assert!(v.is_laurent && !v.integer_coeffs && v.symmetric);
    }
}
