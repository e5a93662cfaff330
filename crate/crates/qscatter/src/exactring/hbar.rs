//! Truncated Laurent series in hbar over the Gaussian rationals, and the
//! change of variables q = e^{i*hbar} (s = e^{i*hbar/2}).

use super::laurent::SLaurent;
use super::rat::{GaussRat, Rat};
use super::ratfunc::RatFuncQ;
use crate::Error;
use std::fmt;

/// Truncated Laurent series sum_k c_k hbar^k, known for k <= truncation.
#[derive(Clone, Debug)]
pub struct HbarSeries {
    /// lowest hbar power; 0 for the zero series
    valuation: i64,
    /// c_{valuation}, c_{valuation+1}, ..., up to degree `truncation`
    coeffs: Vec<GaussRat>,
    truncation: i64,
}

impl HbarSeries {
    pub fn zero(truncation: i64) -> Self {
        HbarSeries {
            valuation: 0,
            coeffs: Vec::new(),
            truncation,
        }
    }

    pub fn from_coeffs(valuation: i64, coeffs: Vec<GaussRat>, truncation: i64) -> Self {
        let mut s = HbarSeries {
            valuation,
            coeffs,
            truncation,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let excess = (self.valuation + self.coeffs.len() as i64 - 1) - self.truncation;
        if excess > 0 {
            self.coeffs.truncate(self.coeffs.len() - excess as usize);
        }
        while let Some(first) = self.coeffs.first() {
            if first.is_zero() {
                self.coeffs.remove(0);
                self.valuation += 1;
            } else {
                break;
            }
        }
        while let Some(last) = self.coeffs.last() {
            if last.is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        if self.coeffs.is_empty() {
            self.valuation = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    /// Coefficient of hbar^k; panics past the truncation order.
    pub fn coeff(&self, k: i64) -> GaussRat {
        assert!(k <= self.truncation, "coefficient past truncation");
        let idx = k - self.valuation;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            GaussRat::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn truncate(&self, t: i64) -> HbarSeries {
        let mut out = self.clone();
        out.truncation = out.truncation.min(t);
        out.normalize();
        out
    }

    pub fn add(&self, rhs: &HbarSeries) -> HbarSeries {
        let trunc = self.truncation.min(rhs.truncation);
        let lo = self.valuation.min(rhs.valuation);
        let mut coeffs = Vec::new();
        for k in lo..=trunc {
            let a = if k <= self.truncation {
                self.coeff(k)
            } else {
                GaussRat::zero()
            };
            let b = if k <= rhs.truncation {
                rhs.coeff(k)
            } else {
                GaussRat::zero()
            };
            coeffs.push(&a + &b);
        }
        HbarSeries::from_coeffs(lo, coeffs, trunc)
    }

    pub fn neg(&self) -> HbarSeries {
        HbarSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            truncation: self.truncation,
        }
    }

    pub fn sub(&self, rhs: &HbarSeries) -> HbarSeries {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &GaussRat) -> HbarSeries {
        if c.is_zero() {
            return HbarSeries::zero(self.truncation);
        }
        HbarSeries::from_coeffs(
            self.valuation,
            self.coeffs.iter().map(|x| x * c).collect(),
            self.truncation,
        )
    }

    /// Multiplies by hbar^k.
    pub fn shift(&self, k: i64) -> HbarSeries {
        HbarSeries {
            valuation: self.valuation + k,
            coeffs: self.coeffs.clone(),
            truncation: self.truncation + k,
        }
    }

    pub fn mul(&self, rhs: &HbarSeries) -> HbarSeries {
        let trunc = (self.truncation + rhs.valuation).min(rhs.truncation + self.valuation);
        if self.is_zero() || rhs.is_zero() {
            return HbarSeries::zero(trunc);
        }
        let lo = self.valuation + rhs.valuation;
        let mut coeffs = vec![GaussRat::zero(); (trunc - lo + 1).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let k = self.valuation + i as i64 + rhs.valuation + j as i64;
                if k > trunc {
                    break;
                }
                let idx = (k - lo) as usize;
                coeffs[idx] = &coeffs[idx] + &(a * b);
            }
        }
        HbarSeries::from_coeffs(lo, coeffs, trunc)
    }

    /// Equality of all coefficients up to the common truncation order.
    pub fn agrees_with(&self, rhs: &HbarSeries) -> bool {
        let trunc = self.truncation.min(rhs.truncation);
        let lo = self.valuation.min(rhs.valuation);
        (lo..=trunc).all(|k| self.coeff(k) == rhs.coeff(k))
    }
}

impl fmt::Display for HbarSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O(h^{})", self.truncation + 1);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let k = self.valuation + i as i64;
            if k == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*h^{k}")?;
            }
        }
        write!(f, " + O(h^{})", self.truncation + 1)
    }
}

/// Expands a Laurent polynomial in s at s = e^{i*hbar/2} as a power series
/// in hbar up to degree `deg`.
fn expand_laurent(f: &SLaurent, deg: i64) -> Vec<GaussRat> {
    let mut out = vec![GaussRat::zero(); (deg + 1) as usize];
    for (key, c) in f.iter() {
        // s^{key/2} = e^{i*key*hbar/4}; hbar^n coefficient (i*key/4)^n / n!
        let base = Rat::from_frac(key, 4);
        let mut pow = GaussRat::one(); // (i*key/4)^n / n!
        for (n, slot) in out.iter_mut().enumerate() {
            if n > 0 {
                pow = &pow * &GaussRat::i().scale(&base);
                pow = pow.scale(&Rat::from_int(n as i64).recip());
            }
            *slot = &*slot + &pow.scale(c);
        }
    }
    out
}

/// Truncated hbar-expansion of f(e^{i*hbar/2}) to degree `t`.
///
/// Numerator and denominator expand separately and divide as truncated
/// Laurent series. The denominator's hbar-valuation is found with a degree
/// guard of 4 extra terms, doubling on the (never observed) chance that the
/// guard window shows only zeros.
pub fn expand_hbar(f: &RatFuncQ, t: i64) -> Result<HbarSeries, Error> {
    if f.is_zero() {
        return Ok(HbarSeries::zero(t));
    }
    let mut guard = 4i64;
    loop {
        let probe = expand_laurent(f.den(), t.max(0) + guard);
        let val = probe.iter().position(|c| !c.is_zero());
        let den_val = match val {
            Some(v) => v as i64,
            None => {
                if guard > 4 * (f.den().max_key().unwrap_or(0).abs() + 4) {
                    return Err(Error::ZeroDenominatorExpansion);
                }
                guard *= 2;
                continue;
            }
        };
        let deg = t.max(0) + den_val + guard;
        let num_coeffs = expand_laurent(f.num(), deg);
        let den_coeffs = expand_laurent(f.den(), deg);
        return Ok(divide_series(
            &num_coeffs,
            &den_coeffs,
            den_val as usize,
            t,
        ));
    }
}

/// Divides two hbar power series given dense coefficients and the
/// denominator valuation; the result is truncated at degree t.
fn divide_series(num: &[GaussRat], den: &[GaussRat], den_val: usize, t: i64) -> HbarSeries {
    let b: Vec<GaussRat> = den[den_val..].to_vec();
    let b0 = b[0].clone();
    let quot_len = num.len() - den_val;
    let mut q = vec![GaussRat::zero(); quot_len];
    for k in 0..quot_len {
        let mut acc = num[k].clone();
        for j in 0..k {
            if k - j < b.len() {
                acc = &acc - &(&q[j] * &b[k - j]);
            }
        }
        q[k] = &acc / &b0;
    }
    // q is the expansion of f * hbar^{den_val}
    HbarSeries::from_coeffs(-(den_val as i64), q, t)
}

/// hbar^0 coefficient of i*hbar*c, i.e. the residue-style classical limit.
/// Requires at most a simple pole at s = 1.
pub fn classical_limit(c: &RatFuncQ) -> Result<Rat, Error> {
    let series = expand_hbar(c, 0)?;
    if series.is_zero() {
        return Ok(Rat::zero());
    }
    if series.valuation() < -1 {
        return Err(Error::PoleOrder {
            valuation: series.valuation(),
        });
    }
    let res = &GaussRat::i() * &series.coeff(-1);
    if !res.is_real() {
        return Err(Error::Internal(format!(
            "classical limit not real: {res}"
        )));
    }
    Ok(res.re)
}
