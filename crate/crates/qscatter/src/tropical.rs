//! Perturbed general-position scattering over the square-zero nilpotent
//! ring, realizing refined tropical curve counts, plus the single-vertex
//! Block-Goettsche oracle.
//!
//! Each initial direction splits into one line per (j, l, A) with A an
//! l-subset of the perturbation variables; every scattering event is then
//! elementary (a single commutator), and the refined counts are read off the
//! masks of the rays asymptotic to a fixed direction.

use crate::exactring::{quantum_integer, Rat, RatFuncQ, SLaurent};
use crate::qtorus::{Context, LatticeVec, NilContext, NilElement, PIndex, TorusElement};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Exact rational point in the plane.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct QPoint {
    pub x: Rat,
    pub y: Rat,
}

impl QPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        QPoint { x, y }
    }

    fn offset_to(&self, other: &QPoint) -> (Rat, Rat) {
        (&other.x - &self.x, &other.y - &self.y)
    }

    fn advance(&self, dir: &LatticeVec, t: &Rat) -> QPoint {
        QPoint::new(
            &self.x + &(t * &Rat::from_int(dir.x)),
            &self.y + &(t * &Rat::from_int(dir.y)),
        )
    }
}

impl fmt::Display for QPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A ray at a general base point carrying a single-mask Hamiltonian.
#[derive(Clone)]
pub struct GenRay {
    pub base: QPoint,
    pub dir: LatticeVec,
    pub ham: NilElement,
    /// z-weight of the single mask (cached)
    pub weight: LatticeVec,
    pub mask: u64,
    /// set of initial lines this ray descends from, as a bitmask of line ids;
    /// distinguishes histories whose generator masks coincide
    pub leaves: u128,
    /// initial in/out half-line pairs share a line id; emitted rays have none
    pub line_id: Option<usize>,
    pub created_at_event: Option<usize>,
}

/// Perturbed diagram over the square-zero ring with n*N generators u_{ja}
/// of weight m_j each.
pub struct PerturbedDiagram {
    ctx: Arc<Context>,
    #[allow(dead_code)]
    nil_ctx: Arc<NilContext>,
    /// per line id: (j, part size l, generator mask)
    line_defs: Vec<(usize, u32, u64)>,
    rays: Vec<GenRay>,
    seed: u64,
    events: Vec<QPoint>,
    propagated: bool,
}

/// Refined tropical count for the tuple w.
#[derive(Clone, Debug, Serialize)]
pub struct TropicalCount {
    pub w: Vec<LatticeVec>,
    pub value: SLaurent,
}

impl TropicalCount {
    /// CLI-facing JSON record {w, ntrop, seed}.
    pub fn to_json(&self, seed: u64) -> serde_json::Value {
        serde_json::json!({
            "w": self.w.iter().map(|v| [v.x, v.y]).collect::<Vec<_>>(),
            "ntrop": self.value,
            "seed": seed,
        })
    }
}

/// A partition k of p: parts[j] lists the parts of p_j in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionDatum {
    pub parts: Vec<Vec<u32>>,
}

impl PartitionDatum {
    pub fn profile(&self) -> PIndex {
        PIndex(self.parts.iter().map(|ps| ps.iter().sum()).collect())
    }

    /// Number of parts s(k).
    pub fn num_parts(&self) -> usize {
        self.parts.iter().map(|ps| ps.len()).sum()
    }

    /// Multiplicity k_{lj} of the part l in the j-th partition.
    pub fn multiplicity(&self, j: usize, l: u32) -> usize {
        self.parts[j].iter().filter(|&&x| x == l).count()
    }

    /// The w(k)-tuple: k_{lj} copies of l*m_j, ordered by j then l.
    pub fn w_tuple(&self, m_tuple: &[LatticeVec]) -> Vec<LatticeVec> {
        let mut w = Vec::new();
        for (j, ps) in self.parts.iter().enumerate() {
            for &l in ps {
                w.push(m_tuple[j].scale(l as i64));
            }
        }
        w
    }

    /// All partitions of p, componentwise.
    pub fn enumerate(p: &PIndex) -> Vec<PartitionDatum> {
        let per_component: Vec<Vec<Vec<u32>>> =
            p.0.iter().map(|&pj| integer_partitions(pj)).collect();
        let mut out = vec![PartitionDatum { parts: Vec::new() }];
        for comp in per_component {
            let mut next = Vec::new();
            for base in &out {
                for choice in &comp {
                    let mut parts = base.parts.clone();
                    parts.push(choice.clone());
                    next.push(PartitionDatum { parts });
                }
            }
            out = next;
        }
        out
    }
}

/// Partitions of n as ascending part lists; the empty partition for n = 0.
pub fn integer_partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in min..=n {
            cur.push(part);
            rec(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut out);
    out
}

/// Single-vertex Block-Goettsche multiplicity [|det(w1, w2)|]_q.
pub fn two_end_oracle(w1: &LatticeVec, w2: &LatticeVec) -> Result<SLaurent> {
    let det = w1.skew(w2).abs();
    if det == 0 {
        return Err(Error::Precondition(format!("collinear ends {w1}, {w2}")));
    }
    Ok(quantum_integer(det as u32))
}

const MAX_RESEEDS: u64 = 32;

/// Builds the perturbed diagram for a seeded choice of general-position base
/// points. Each (j, l, A) contributes an initial full line, stored as an
/// ingoing half (dir -m_j) plus its outgoing continuation (dir +m_j), both
/// carrying (1/l)((-1)^{l-1}/(s^l - s^{-l})) l! (prod_{a in A} u_{ja})
/// zhat^{l m_j}.
pub fn build_perturbed(ctx: &Arc<Context>, seed: u64) -> Result<PerturbedDiagram> {
    if ctx.is_orbifold() {
        return Err(Error::Precondition(
            "perturbed scattering requires all orbifold orders equal to 1".into(),
        ));
    }
    let mut last_err = None;
    for attempt in 0..MAX_RESEEDS {
        match try_build(ctx, seed.wrapping_add(attempt)) {
            Ok(d) => return Ok(d),
            Err(e @ Error::Genericity(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Genericity("no attempt recorded".into())))
}

fn try_build(ctx: &Arc<Context>, seed: u64) -> Result<PerturbedDiagram> {
    let n = ctx.n();
    let order = ctx.order as usize;
    let mut weights = Vec::with_capacity(n * order);
    for m in &ctx.m_tuple {
        for _ in 0..order {
            weights.push(*m);
        }
    }
    let nil_ctx = NilContext::new(weights);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = Rat::from_int(4099);
    let rand_rat =
        |rng: &mut ChaCha8Rng| &Rat::from_int(rng.gen_range(-40000i64..=40000)) / &den;

    let mut rays: Vec<GenRay> = Vec::new();
    let mut line_defs: Vec<(usize, u32, u64)> = Vec::new();
    for (j, m) in ctx.m_tuple.iter().enumerate() {
        for l in 1..=order {
            for mask in subsets_of_size(order, l) {
                let base = QPoint::new(rand_rat(&mut rng), rand_rat(&mut rng));
                let shifted = mask << (j * order);
                let sign = if l % 2 == 1 { 1 } else { -1 };
                let mut factorial = 1i64;
                for i in 2..=l as i64 {
                    factorial *= i;
                }
                let coeff = RatFuncQ::new(
                    SLaurent::constant(Rat::from_frac(sign * factorial, l as i64)),
                    RatFuncQ::s_pow_minus_inv(l as i64),
                );
                let weight = m.scale(l as i64);
                let ham = NilElement::single_mask(nil_ctx.clone(), shifted, coeff);
                let line = line_defs.len();
                line_defs.push((j, l as u32, shifted));
                for dir in [m.neg(), *m] {
                    rays.push(GenRay {
                        base: base.clone(),
                        dir,
                        ham: ham.clone(),
                        weight,
                        mask: shifted,
                        leaves: 1u128 << line,
                        line_id: Some(line),
                        created_at_event: None,
                    });
                }
            }
        }
    }
    assert!(line_defs.len() <= 128, "line id bitmask limited to 128");

    let d = PerturbedDiagram {
        ctx: ctx.clone(),
        nil_ctx,
        line_defs,
        rays,
        seed,
        events: Vec::new(),
        propagated: false,
    };
    d.check_initial_genericity()?;
    Ok(d)
}

/// All l-subsets of {0..n-1} as bitmasks.
fn subsets_of_size(n: usize, l: usize) -> Vec<u64> {
    fn rec(start: usize, n: usize, left: usize, acc: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for b in start..n {
            rec(b + 1, n, left - 1, acc | (1 << b), out);
        }
    }
    let mut out = Vec::new();
    rec(0, n, l, 0, &mut out);
    out
}

/// Intersection parameters (t1, t2) of two rays' supporting lines, if they
/// meet in a single point.
fn line_intersection(a: &GenRay, b: &GenRay) -> Option<(Rat, Rat)> {
    let det = a.dir.skew(&b.dir);
    if det == 0 {
        return None;
    }
    let (bx, by) = a.base.offset_to(&b.base);
    let det = Rat::from_int(det);
    // t1 = (b x d2)/(d1 x d2), t2 = (b x d1)/(d1 x d2), with x the 2d cross
    let cross_b_d2 = &(&bx * &Rat::from_int(b.dir.y)) - &(&by * &Rat::from_int(b.dir.x));
    let cross_b_d1 = &(&bx * &Rat::from_int(a.dir.y)) - &(&by * &Rat::from_int(a.dir.x));
    Some((&cross_b_d2 / &det, &cross_b_d1 / &det))
}

impl PerturbedDiagram {
    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rays(&self) -> &[GenRay] {
        &self.rays
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    /// Number of initial perturbed lines (each stored as two half-rays).
    pub fn num_lines(&self) -> usize {
        self.rays
            .iter()
            .filter_map(|r| r.line_id)
            .max()
            .map_or(0, |max| max + 1)
    }

    fn check_initial_genericity(&self) -> Result<()> {
        for (i, a) in self.rays.iter().enumerate() {
            for b in self.rays.iter().skip(i + 1) {
                if a.line_id == b.line_id {
                    continue;
                }
                if a.dir.skew(&b.dir) == 0 {
                    // parallel: reject collinear supporting lines
                    let (bx, by) = a.base.offset_to(&b.base);
                    let cross =
                        &(&bx * &Rat::from_int(a.dir.y)) - &(&by * &Rat::from_int(a.dir.x));
                    if cross.is_zero() {
                        return Err(Error::Genericity(format!(
                            "rays from {} and {} share a line",
                            a.base, b.base
                        )));
                    }
                } else if let Some((t1, t2)) = line_intersection(a, b) {
                    if (t1.is_zero() && !t2.is_negative()) || (t2.is_zero() && !t1.is_negative())
                    {
                        return Err(Error::Genericity(format!(
                            "base point lies on another ray near {}",
                            a.base
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Runs elementary scatterings to a fixpoint. Every pairwise crossing of
    /// rays with disjoint masks emits one outgoing ray carrying the
    /// commutator Hamiltonian; masks strictly grow, so the sweep terminates.
    pub fn propagate(&mut self) -> Result<()> {
        let bound = self.nil_ctx.weights.len() as u32;
        self.propagate_to_order(bound)
    }

    /// Propagation with emissions truncated past the given total mask size.
    /// Coefficients of masks within the bound agree with the full run, since
    /// emissions only ever merge smaller masks into larger ones.
    pub fn propagate_to_order(&mut self, bound: u32) -> Result<()> {
        use rayon::prelude::*;
        // Pairs are examined once they can interact: overlapping masks
        // cannot emit (square-zero) and collinear weights commute exactly, so
        // both are skipped outright. Degeneracy tracking only has to see the
        // interacting pairs: a genuine triple scattering involves three
        // pairwise mask-disjoint, pairwise non-collinear rays, all of whose
        // crossings are processed here.
        let mut event_points: BTreeMap<QPoint, Vec<u64>> = BTreeMap::new();
        let mut scanned = 0usize;
        loop {
            let count = self.rays.len();
            if scanned == count {
                break;
            }
            let pairs: Vec<(usize, usize)> = (scanned..count)
                .flat_map(|j| (0..j).map(move |i| (i, j)))
                .collect();
            scanned = count;
            let rays = &self.rays;
            let crossings: Vec<(usize, usize, QPoint, Option<GenRay>)> = pairs
                .par_iter()
                .filter_map(|&(i, j)| {
                    let (a, b) = (&rays[i], &rays[j]);
                    if a.line_id.is_some() && a.line_id == b.line_id {
                        return None;
                    }
                    if a.mask & b.mask != 0 {
                        return None;
                    }
                    let skew = a.weight.skew(&b.weight);
                    if skew == 0 {
                        return None;
                    }
                    let (t1, t2) = line_intersection(a, b)?;
                    if !t1.is_positive() || !t2.is_positive() {
                        return None;
                    }
                    let point = a.base.advance(&a.dir, &t1);
                    debug_assert_eq!(point, b.base.advance(&b.dir, &t2));
                    if (a.mask | b.mask).count_ones() > bound {
                        return Some((i, j, point, None));
                    }
                    let (first, second) = if skew > 0 { (a, b) } else { (b, a) };
                    let ham = first
                        .ham
                        .commutator(&second.ham)
                        .expect("shared nil context");
                    if ham.is_zero() {
                        return Some((i, j, point, None));
                    }
                    let weight = a.weight.add(&b.weight);
                    debug_assert_eq!(a.leaves & b.leaves, 0);
                    let ray = GenRay {
                        base: point.clone(),
                        dir: weight,
                        ham,
                        weight,
                        mask: a.mask | b.mask,
                        leaves: a.leaves | b.leaves,
                        line_id: None,
                        created_at_event: None,
                    };
                    Some((i, j, point, Some(ray)))
                })
                .collect();
            for (i, j, point, ray) in crossings {
                let here = event_points.entry(point.clone()).or_default();
                for mask in [self.rays[i].mask, self.rays[j].mask] {
                    if !here.contains(&mask) {
                        here.push(mask);
                    }
                }
                let masks = here.clone();
                for (x, ma) in masks.iter().enumerate() {
                    for (y, mb) in masks.iter().enumerate().skip(x + 1) {
                        for mc in masks.iter().skip(y + 1) {
                            if ma & mb == 0 && ma & mc == 0 && mb & mc == 0 {
                                return Err(Error::Genericity(format!(
                                    "triple scattering at {point}"
                                )));
                            }
                        }
                    }
                }
                if let Some(mut ray) = ray {
                    ray.created_at_event = Some(self.events.len());
                    self.events.push(point);
                    self.rays.push(ray);
                }
            }
        }
        self.propagated = true;
        Ok(())
    }

    /// True for rays that belong to the asymptotic direction +m: emitted rays
    /// along m and the outgoing halves of initial lines along m.
    fn is_asymptotic_to(ray: &GenRay, m: &LatticeVec) -> bool {
        if ray.dir.is_zero() || ray.dir.primitive() != *m {
            return false;
        }
        // outgoing halves carry weight along +dir; ingoing halves are excluded
        ray.weight.primitive() == *m
    }

    /// Sum over all rays asymptotic to +m descending from exactly the given
    /// set of initial lines.
    fn collect_leaf_coeff(&self, m: &LatticeVec, leaves: u128) -> RatFuncQ {
        let mut acc = RatFuncQ::zero();
        for ray in &self.rays {
            if Self::is_asymptotic_to(ray, m) && ray.leaves == leaves {
                acc = acc.add(&ray.ham.coeff(ray.mask));
            }
        }
        acc
    }

    /// Canonical choice of one initial line per part of k: ascending parts
    /// first-fit into the lowest free generator indices of each block. The
    /// result is the bitmask of the chosen line ids.
    pub fn canonical_lines(&self, k: &PartitionDatum) -> Result<u128> {
        self.assign_lines(k, false)
    }

    fn assign_lines(&self, k: &PartitionDatum, from_top: bool) -> Result<u128> {
        let order = self.ctx.order as usize;
        let mut lines = 0u128;
        for (j, ps) in k.parts.iter().enumerate() {
            let mut free: Vec<usize> = (0..order).collect();
            if from_top {
                free.reverse();
            }
            let mut parts = ps.clone();
            if from_top {
                parts.reverse();
            }
            for &l in &parts {
                if free.len() < l as usize {
                    return Err(Error::Precondition(format!(
                        "partition of p_{j} needs more than {order} generators"
                    )));
                }
                let mut mask = 0u64;
                for a in free.drain(..l as usize) {
                    mask |= 1 << (j * order + a);
                }
                let line = self
                    .line_defs
                    .iter()
                    .position(|&(dj, dl, dm)| dj == j && dl == l && dm == mask)
                    .ok_or_else(|| Error::Internal("missing initial line".into()))?;
                lines |= 1 << line;
            }
        }
        Ok(lines)
    }

    /// Refined tropical count for the partition datum k: sums the rays
    /// descending from one canonical choice of initial lines per part and
    /// divides out the per-copy factors.
    pub fn extract_ntrop(&self, k: &PartitionDatum) -> Result<TropicalCount> {
        let count = self.extract_with_lines(k, self.canonical_lines(k)?)?;
        // any valid disjoint assignment gives the same value
        debug_assert_eq!(
            count.value,
            self.extract_with_lines(k, self.assign_lines(k, true)?)?.value
        );
        Ok(count)
    }

    fn extract_with_lines(&self, k: &PartitionDatum, leaves: u128) -> Result<TropicalCount> {
        if !self.propagated {
            return Err(Error::Precondition("diagram not propagated".into()));
        }
        let p = k.profile();
        let total = self.ctx.r_of(&p);
        if total.is_zero() {
            return Err(Error::Precondition("r(p) = 0 has no asymptotic ray".into()));
        }
        let m_p = total.primitive();
        let collected = self.collect_leaf_coeff(&m_p, leaves);
        // divide by (1/l)(-1)^{l-1} l! (s - s^-1)/(s^l - s^{-l}) per copy and
        // by the overall 1/(s - s^-1)
        let mut value = collected.mul(&RatFuncQ::from_laurent(RatFuncQ::s_pow_minus_inv(1)));
        for ps in &k.parts {
            for &l in ps {
                let l = l as i64;
                let mut factorial = 1i64;
                for i in 2..=l {
                    factorial *= i;
                }
                let sign = if l % 2 == 1 { 1 } else { -1 };
                let inv_factor = RatFuncQ::new(
                    RatFuncQ::s_pow_minus_inv(l).scale(&Rat::from_frac(sign * l, factorial)),
                    RatFuncQ::s_pow_minus_inv(1),
                );
                value = value.mul(&inv_factor);
            }
        }
        let w = k.w_tuple(&self.ctx.m_tuple);
        let verdict = value.integrality_symmetry();
        if !verdict.is_laurent
            || !verdict.integer_coeffs
            || !verdict.symmetric
            || !value.num().has_nonnegative_coeffs()
        {
            return Err(Error::TropicalValidation(format!(
                "count for w = {w:?} is not in N[q^(1/2), q^(-1/2)]: {value}"
            )));
        }
        Ok(TropicalCount {
            w,
            value: value.as_laurent().expect("validated laurent").clone(),
        })
    }

    /// Asymptotic Hamiltonian in direction m, restricted to t-order <= the
    /// context truncation: for each profile p the coefficient is read off one
    /// canonical mask (the lowest generator indices) and divided by
    /// prod p_j!, inverting t^p = sum_{|B_j|=p_j} (prod p_j!) u^B.
    pub fn asymptotic_element(&self, m: &LatticeVec) -> TorusElement {
        let order = self.ctx.order as usize;
        let n = self.ctx.n();
        let mut out = TorusElement::zero(self.ctx.clone());
        for p in PIndex::all_up_to(n, self.ctx.order) {
            if self.ctx.r_of(&p).is_zero() {
                continue;
            }
            let mut mask = 0u64;
            for (j, &pj) in p.0.iter().enumerate() {
                for a in 0..pj as usize {
                    mask |= 1 << (j * order + a);
                }
            }
            let mut acc = RatFuncQ::zero();
            for ray in &self.rays {
                if Self::is_asymptotic_to(ray, m) && ray.mask == mask {
                    acc = acc.add(&ray.ham.coeff(mask));
                }
            }
            let mut divisor = Rat::one();
            for &pj in &p.0 {
                for i in 2..=pj as i64 {
                    divisor = &divisor * &Rat::from_int(i);
                }
            }
            out.add_term(p, acc.scale(&divisor.recip()));
        }
        out
    }
}
