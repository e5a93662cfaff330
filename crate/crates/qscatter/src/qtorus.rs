//! Truncated quantum torus algebra (plain and twisted), its square-zero
//! nilpotent variant, exponential/logarithm/adjoint, and the quantum
//! dilogarithm.
//!
//! Elements live in the graded subalgebra spanned by t^p zhat^{r(p)} for
//! p in N^n, where r(e_j) = m_j; the z-exponent is implied by p and never
//! stored. In the twisted algebra the product carries the extra sign
//! (-1)^{<r(p), r(p')>}.

use crate::exactring::{Rat, RatFuncQ, SLaurent};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use crate::exactring::hbar::classical_limit;

/// Element of the character lattice M = Z^2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct LatticeVec {
    pub x: i64,
    pub y: i64,
}

impl LatticeVec {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticeVec { x, y }
    }

    pub fn zero() -> Self {
        LatticeVec::new(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// The unimodular skew form <m, m'> = x y' - y x'.
    pub fn skew(&self, other: &LatticeVec) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(&self, other: &LatticeVec) -> i64 {
        self.x * other.x + self.y * other.y
    }

    pub fn add(&self, other: &LatticeVec) -> LatticeVec {
        LatticeVec::new(self.x + other.x, self.y + other.y)
    }

    pub fn neg(&self) -> LatticeVec {
        LatticeVec::new(-self.x, -self.y)
    }

    pub fn scale(&self, k: i64) -> LatticeVec {
        LatticeVec::new(self.x * k, self.y * k)
    }

    /// Divisibility |m|: the largest k with m = k*v, v integral; 0 for m = 0.
    pub fn divisibility(&self) -> i64 {
        crate::exactring::gcd_i64(self.x, self.y)
    }

    pub fn is_primitive(&self) -> bool {
        self.divisibility() == 1
    }

    /// Primitive vector on the same ray; panics on zero.
    pub fn primitive(&self) -> LatticeVec {
        let d = self.divisibility();
        assert!(d > 0, "zero vector has no direction");
        LatticeVec::new(self.x / d, self.y / d)
    }

    /// Total order by anticlockwise angle in [0, 2pi), exact.
    pub fn angle_cmp(&self, other: &LatticeVec) -> std::cmp::Ordering {
        fn half(v: &LatticeVec) -> u8 {
            // 0 for angle in [0, pi) starting at the positive x-axis
            if v.y > 0 || (v.y == 0 && v.x > 0) {
                0
            } else {
                1
            }
        }
        let (ha, hb) = (half(self), half(other));
        ha.cmp(&hb).then_with(|| 0.cmp(&self.skew(other)))
    }
}

impl fmt::Display for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Shared data of a truncated quantum torus: the m-tuple, orbifold orders,
/// truncation order, and the twist flag.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Context {
    pub m_tuple: Vec<LatticeVec>,
    pub r_tuple: Vec<u32>,
    pub order: u32,
    pub twisted: bool,
}

impl Context {
    pub fn new(m_tuple: Vec<LatticeVec>, r_tuple: Vec<u32>, order: u32) -> Arc<Self> {
        assert!(order >= 1, "truncation order must be >= 1");
        assert_eq!(m_tuple.len(), r_tuple.len());
        for m in &m_tuple {
            assert!(m.is_primitive(), "m-tuple entries must be primitive: {m}");
        }
        for &r in &r_tuple {
            assert!(r >= 1, "orbifold orders must be >= 1");
        }
        Arc::new(Context {
            m_tuple,
            r_tuple,
            order,
            twisted: false,
        })
    }

    pub fn plain(m_tuple: Vec<LatticeVec>, order: u32) -> Arc<Self> {
        let n = m_tuple.len();
        Self::new(m_tuple, vec![1; n], order)
    }

    pub fn n(&self) -> usize {
        self.m_tuple.len()
    }

    pub fn is_orbifold(&self) -> bool {
        self.r_tuple.iter().any(|&r| r != 1)
    }

    /// The additive map r: P -> M, e_j -> m_j.
    pub fn r_of(&self, p: &PIndex) -> LatticeVec {
        let mut acc = LatticeVec::zero();
        for (pj, mj) in p.0.iter().zip(&self.m_tuple) {
            acc = acc.add(&mj.scale(*pj as i64));
        }
        acc
    }

    /// Quadratic refinement sigma_P(p) = sigma_M(r(p)) = (-1)^{|r(p)|}.
    pub fn sigma(&self, p: &PIndex) -> i64 {
        sigma_m(&self.r_of(p))
    }

    pub fn with_order(self: &Arc<Self>, order: u32) -> Arc<Self> {
        let mut ctx = (**self).clone();
        ctx.order = order;
        Arc::new(ctx)
    }

    pub fn with_twisted(self: &Arc<Self>, twisted: bool) -> Arc<Self> {
        let mut ctx = (**self).clone();
        ctx.twisted = twisted;
        Arc::new(ctx)
    }

    /// Contexts agree as algebras (same tuples, truncation and twist).
    pub fn compatible(a: &Arc<Context>, b: &Arc<Context>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// sigma_M(m) = (-1)^{|m|}, the quadratic refinement of (-1)^{<,->} that is
/// -1 on every primitive vector; sigma_M(0) = 1.
pub fn sigma_m(m: &LatticeVec) -> i64 {
    // the zero vector has divisibility 0, so the even branch covers it
    if m.divisibility() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Exponent index p in P = N^n.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct PIndex(pub Vec<u32>);

impl PIndex {
    pub fn zero(n: usize) -> Self {
        PIndex(vec![0; n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut p = vec![0; n];
        p[j] = 1;
        PIndex(p)
    }

    pub fn ord(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &PIndex) -> PIndex {
        PIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, k: u32) -> PIndex {
        PIndex(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// gcd of the entries; 0 for the zero index.
    pub fn content(&self) -> u32 {
        self.0
            .iter()
            .fold(0u64, |g, &a| crate::exactring::gcd_u64(g, a as u64)) as u32
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Writes self = k * base; None if base does not divide self.
    pub fn multiple_of(&self, base: &PIndex) -> Option<u32> {
        let k = self.ord().checked_div(base.ord().max(1))?;
        if k >= 1 && &base.scale(k) == self {
            Some(k)
        } else {
            None
        }
    }

    /// All p with ord(p) <= order, graded-lex order.
    pub fn all_up_to(n: usize, order: u32) -> Vec<PIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(cur: &mut Vec<u32>, j: usize, left: u32, out: &mut Vec<PIndex>) {
            if j == cur.len() {
                out.push(PIndex(cur.clone()));
                return;
            }
            for v in 0..=left {
                cur[j] = v;
                rec(cur, j + 1, left - v, out);
                cur[j] = 0;
            }
        }
        rec(&mut cur, 0, order, &mut out);
        out.retain(|p| !p.is_zero());
        out.sort();
        out
    }
}

impl fmt::Display for PIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Truncated element of the (possibly twisted) quantum torus algebra.
#[derive(Clone)]
pub struct TorusElement {
    ctx: Arc<Context>,
    terms: BTreeMap<PIndex, RatFuncQ>,
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        Context::compatible(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for TorusElement {}

impl TorusElement {
    pub fn zero(ctx: Arc<Context>) -> Self {
        TorusElement {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: Arc<Context>) -> Self {
        let mut e = Self::zero(ctx);
        e.add_term(PIndex::zero(e.ctx.n()), RatFuncQ::one());
        e
    }

    pub fn monomial(ctx: Arc<Context>, p: PIndex, c: RatFuncQ) -> Self {
        let mut e = Self::zero(ctx);
        e.add_term(p, c);
        e
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, p: &PIndex) -> RatFuncQ {
        self.terms.get(p).cloned().unwrap_or_else(RatFuncQ::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PIndex, &RatFuncQ)> {
        self.terms.iter()
    }

    /// Adds c * t^p zhat^{r(p)}; terms past the truncation order are dropped.
    pub fn add_term(&mut self, p: PIndex, c: RatFuncQ) {
        debug_assert_eq!(p.0.len(), self.ctx.n());
        if c.is_zero() || p.ord() > self.ctx.order {
            return;
        }
        let entry = self.terms.entry(p.clone()).or_insert_with(RatFuncQ::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, rhs: &TorusElement) -> TorusElement {
        assert!(Context::compatible(&self.ctx, &rhs.ctx));
        let mut out = self.clone();
        for (p, c) in rhs.iter() {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &TorusElement) -> TorusElement {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> TorusElement {
        TorusElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &RatFuncQ) -> TorusElement {
        if c.is_zero() {
            return TorusElement::zero(self.ctx.clone());
        }
        TorusElement {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(p, x)| (p.clone(), x.mul(c)))
                .collect(),
        }
    }

    pub fn scale_rat(&self, c: &Rat) -> TorusElement {
        self.scale(&RatFuncQ::constant(c.clone()))
    }

    /// Quantum torus product: term (p, c)(p', c') contributes
    /// (p + p', c c' s^{<r(p), r(p')>}), with the extra sign
    /// (-1)^{<r(p), r(p')>} in the twisted algebra; order-N truncated.
    pub fn mul(&self, rhs: &TorusElement) -> Result<TorusElement> {
        if !Context::compatible(&self.ctx, &rhs.ctx) {
            return Err(Error::ContextMismatch);
        }
        let n_max = self.ctx.order;
        let mut out = TorusElement::zero(self.ctx.clone());
        for (p, c) in self.iter() {
            let rp = self.ctx.r_of(p);
            for (p2, c2) in rhs.iter() {
                if p.ord() + p2.ord() > n_max {
                    continue;
                }
                let rp2 = self.ctx.r_of(p2);
                let k = rp.skew(&rp2);
                let mut coeff = c.mul(c2).mul(&RatFuncQ::s_pow(k));
                if self.ctx.twisted && k.rem_euclid(2) == 1 {
                    coeff = coeff.neg();
                }
                out.add_term(p.add(p2), coeff);
            }
        }
        Ok(out)
    }

    /// Truncated exp; requires no term at p = 0.
    pub fn exp(&self) -> Result<TorusElement> {
        if !self.coeff(&PIndex::zero(self.ctx.n())).is_zero() {
            return Err(Error::Precondition(
                "exp requires vanishing constant term".into(),
            ));
        }
        let mut acc = TorusElement::one(self.ctx.clone());
        let mut power = TorusElement::one(self.ctx.clone());
        for k in 1..=self.ctx.order as i64 {
            power = power.mul(self)?.scale_rat(&Rat::from_int(k).recip());
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc)
    }

    /// Truncated log; requires coefficient 1 at p = 0.
    pub fn log(&self) -> Result<TorusElement> {
        if !self.coeff(&PIndex::zero(self.ctx.n())).is_one() {
            return Err(Error::Precondition(
                "log requires unit constant term".into(),
            ));
        }
        let x = self.sub(&TorusElement::one(self.ctx.clone()));
        let mut acc = TorusElement::zero(self.ctx.clone());
        let mut power = TorusElement::one(self.ctx.clone());
        for k in 1..=self.ctx.order as i64 {
            power = power.mul(&x)?;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale_rat(&Rat::from_frac(sign, k)));
        }
        Ok(acc)
    }

    /// Adjoint action exp(H) f exp(-H), computed as sum_k ad_H^k(f)/k!.
    pub fn adjoint(h: &TorusElement, f: &TorusElement) -> Result<TorusElement> {
        if !h.coeff(&PIndex::zero(h.ctx.n())).is_zero() {
            return Err(Error::Precondition(
                "adjoint requires vanishing constant term".into(),
            ));
        }
        let mut acc = f.clone();
        let mut nested = f.clone();
        let mut factorial = Rat::one();
        for k in 1..=h.ctx.order as i64 {
            nested = h.mul(&nested)?.sub(&nested.mul(h)?);
            if nested.is_zero() {
                break;
            }
            factorial = &factorial * &Rat::from_int(k);
            acc = acc.add(&nested.scale_rat(&factorial.recip()));
        }
        Ok(acc)
    }

    /// Terms with r(p) = 0.
    pub fn central_part(&self) -> TorusElement {
        TorusElement {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| self.ctx.r_of(p).is_zero())
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn noncentral_part(&self) -> TorusElement {
        TorusElement {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| !self.ctx.r_of(p).is_zero())
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms of exact t-order l.
    pub fn homogeneous_part(&self, l: u32) -> TorusElement {
        TorusElement {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.ord() == l)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// Lowest t-order of a nonzero term.
    pub fn min_order(&self) -> Option<u32> {
        self.terms.keys().map(|p| p.ord()).min()
    }

    /// Re-truncates into another (usually lower-order) context.
    pub fn into_ctx(&self, ctx: &Arc<Context>) -> TorusElement {
        let mut out = TorusElement::zero(ctx.clone());
        for (p, c) in self.iter() {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    /// Coefficientwise multiplication by sigma_P.
    pub fn twist_coefficients(&self) -> TorusElement {
        TorusElement {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(p, c)| {
                    let c = if self.ctx.sigma(p) < 0 { c.neg() } else { c.clone() };
                    (p.clone(), c)
                })
                .collect(),
        }
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c}] t^{p} z^{}", self.ctx.r_of(p))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Coefficient of x^n in the quantum dilogarithm
/// Psi_q(x) = exp(-sum_{l>=1} x^l / (l (q^{l/2} - q^{-l/2}))),
/// computed from the exponential form. Equals q^{n/2}/prod_{j<=n}(1 - q^j).
pub fn quantum_dilog_coeff(n: u32) -> RatFuncQ {
    assert!(n >= 1);
    // one commuting variable: exp of a power series in x, truncated past x^n
    let mut ham = vec![RatFuncQ::zero(); (n + 1) as usize];
    for l in 1..=n as i64 {
        ham[l as usize] = RatFuncQ::new(
            SLaurent::constant(Rat::from_frac(-1, l)),
            RatFuncQ::s_pow_minus_inv(l),
        );
    }
    let mut acc = vec![RatFuncQ::zero(); (n + 1) as usize];
    acc[0] = RatFuncQ::one();
    let mut power = acc.clone();
    let mut factorial = Rat::one();
    for k in 1..=n {
        // power <- power * ham, truncated
        let mut next = vec![RatFuncQ::zero(); (n + 1) as usize];
        for (i, a) in power.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in ham.iter().enumerate() {
                if i + j <= n as usize && !b.is_zero() {
                    next[i + j] = next[i + j].add(&a.mul(b));
                }
            }
        }
        power = next;
        factorial = &factorial * &Rat::from_int(k as i64);
        let inv = RatFuncQ::constant(factorial.recip());
        for (slot, p) in acc.iter_mut().zip(&power) {
            *slot = slot.add(&p.mul(&inv));
        }
    }
    acc[n as usize].clone()
}

/// Closed form q^{n/2} / prod_{j=1}^n (1 - q^j) for the x^n dilogarithm
/// coefficient (q-binomial theorem).
pub fn quantum_dilog_coeff_closed(n: u32) -> RatFuncQ {
    assert!(n >= 1);
    let mut den = SLaurent::one();
    for j in 1..=n as i64 {
        let factor = SLaurent::from_terms([(0, Rat::one()), (4 * j, -Rat::one())]);
        den = &den * &factor;
    }
    RatFuncQ::new(SLaurent::s_pow(n as i64), den)
}

/// Psi_q(c * t^{p0} zhat^{r(p0)}) as a torus element, truncated at the
/// context order. Powers of a single monomial commute, so the coefficient
/// at k*p0 is dilog_coeff(k) * c^k.
pub fn psi_of_monomial(ctx: &Arc<Context>, p0: &PIndex, c: &RatFuncQ) -> TorusElement {
    let mut out = TorusElement::one(ctx.clone());
    let step = p0.ord().max(1);
    let mut k = 1u32;
    while k * step <= ctx.order {
        out.add_term(p0.scale(k), quantum_dilog_coeff(k).mul(&c.pow(k)));
        k += 1;
    }
    out
}

/// Context of the square-zero nilpotent coefficient ring: one lattice weight
/// per generator u, with u^2 = 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NilContext {
    pub weights: Vec<LatticeVec>,
}

impl NilContext {
    pub fn new(weights: Vec<LatticeVec>) -> Arc<Self> {
        assert!(weights.len() <= 64, "mask width limited to 64 generators");
        Arc::new(NilContext { weights })
    }

    pub fn weight_of_mask(&self, mask: u64) -> LatticeVec {
        let mut acc = LatticeVec::zero();
        for (i, w) in self.weights.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = acc.add(w);
            }
        }
        acc
    }
}

/// Element of the square-zero ring tensored with the quantum torus: sparse
/// map from generator-subset masks to coefficients; the z-exponent of a term
/// is the sum of the weights in its mask.
#[derive(Clone, PartialEq, Eq)]
pub struct NilElement {
    ctx: Arc<NilContext>,
    terms: BTreeMap<u64, RatFuncQ>,
}

impl NilElement {
    pub fn zero(ctx: Arc<NilContext>) -> Self {
        NilElement {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn single_mask(ctx: Arc<NilContext>, mask: u64, c: RatFuncQ) -> Self {
        let mut e = Self::zero(ctx);
        e.add_term(mask, c);
        e
    }

    pub fn ctx(&self) -> &Arc<NilContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mask: u64) -> RatFuncQ {
        self.terms.get(&mask).cloned().unwrap_or_else(RatFuncQ::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &RatFuncQ)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn add_term(&mut self, mask: u64, c: RatFuncQ) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(RatFuncQ::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, rhs: &NilElement) -> NilElement {
        assert!(Arc::ptr_eq(&self.ctx, &rhs.ctx) || self.ctx == rhs.ctx);
        let mut out = self.clone();
        for (m, c) in rhs.iter() {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> NilElement {
        NilElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(&m, c)| (m, c.neg())).collect(),
        }
    }

    /// Square-zero quantum product: overlapping masks vanish, disjoint masks
    /// join with the factor s^{<w(U), w(U')>}.
    pub fn mul(&self, rhs: &NilElement) -> Result<NilElement> {
        if !(Arc::ptr_eq(&self.ctx, &rhs.ctx) || self.ctx == rhs.ctx) {
            return Err(Error::ContextMismatch);
        }
        let mut out = NilElement::zero(self.ctx.clone());
        for (m1, c1) in self.iter() {
            let w1 = self.ctx.weight_of_mask(m1);
            for (m2, c2) in rhs.iter() {
                if m1 & m2 != 0 {
                    continue;
                }
                let w2 = self.ctx.weight_of_mask(m2);
                let k = w1.skew(&w2);
                out.add_term(m1 | m2, c1.mul(c2).mul(&RatFuncQ::s_pow(k)));
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, rhs: &NilElement) -> Result<NilElement> {
        Ok(self.mul(rhs)?.add(&rhs.mul(self)?.neg()))
    }
}

impl fmt::Debug for NilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c}] u^{m:b}")?;
        }
        Ok(())
    }
}
