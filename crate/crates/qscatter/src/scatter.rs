//! Scattering diagrams through the origin: path-ordered loop products,
//! consistency checking, and the canonical order-by-order consistent
//! completion.

use crate::qtorus::{Context, LatticeVec, PIndex, TorusElement};
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A ray through the origin carrying a Hamiltonian. The support half-line is
/// R_{>=0} * dir; the Hamiltonian's z-exponents r(p) lie along -dir for
/// ingoing rays and along +dir for outgoing rays.
#[derive(Clone, PartialEq)]
pub struct Ray {
    pub dir: LatticeVec,
    pub ingoing: bool,
    pub ham: TorusElement,
}

impl Ray {
    pub fn new(dir: LatticeVec, ingoing: bool, ham: TorusElement) -> Result<Self> {
        if !dir.is_primitive() {
            return Err(Error::Precondition(format!(
                "ray direction must be primitive: {dir}"
            )));
        }
        let ray = Ray { dir, ingoing, ham };
        ray.validate_support()?;
        Ok(ray)
    }

    /// m(H_d): -dir for ingoing rays, +dir for outgoing rays.
    pub fn z_direction(&self) -> LatticeVec {
        if self.ingoing {
            self.dir.neg()
        } else {
            self.dir
        }
    }

    fn validate_support(&self) -> Result<()> {
        let zdir = self.z_direction();
        for (p, _) in self.ham.iter() {
            if p.is_zero() {
                return Err(Error::Precondition(
                    "ray Hamiltonian may not contain a p = 0 term".into(),
                ));
            }
            let rp = self.ham.ctx().r_of(p);
            if rp.is_zero() || rp.primitive() != zdir {
                return Err(Error::Precondition(format!(
                    "ray along {} carries term with z-exponent {rp}",
                    self.dir
                )));
            }
        }
        Ok(())
    }

    /// Crossing sign along an anticlockwise loop: +1 outgoing, -1 ingoing.
    fn epsilon(&self) -> i64 {
        if self.ingoing {
            -1
        } else {
            1
        }
    }
}

/// Ordered set of rays over a fixed context; at most one ingoing and one
/// outgoing ray per primitive direction (merged on insert).
#[derive(Clone)]
pub struct ScatteringDiagram {
    ctx: Arc<Context>,
    rays: Vec<Ray>,
}

/// Diagnostics from a completion run.
#[derive(Clone, Debug, Default)]
pub struct CompletionReport {
    /// number of central log terms projected out
    pub central_discarded: usize,
    /// correction sign validated at the first nontrivial order:
    /// true means corrections enter as -H (the expected convention)
    pub negative_correction: Option<bool>,
}

impl ScatteringDiagram {
    pub fn new(ctx: Arc<Context>) -> Self {
        ScatteringDiagram { ctx, rays: Vec::new() }
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn ingoing_rays(&self) -> impl Iterator<Item = &Ray> {
        self.rays.iter().filter(|r| r.ingoing)
    }

    pub fn outgoing_rays(&self) -> impl Iterator<Item = &Ray> {
        self.rays.iter().filter(|r| !r.ingoing)
    }

    /// Inserts a ray, merging with an existing ray of the same direction and
    /// orientation; zero Hamiltonians are dropped.
    pub fn add_ray(&mut self, ray: Ray) -> Result<()> {
        if !Context::compatible(&self.ctx, ray.ham.ctx()) {
            return Err(Error::ContextMismatch);
        }
        if ray.ham.is_zero() {
            return Ok(());
        }
        if let Some(existing) = self
            .rays
            .iter_mut()
            .find(|r| r.dir == ray.dir && r.ingoing == ray.ingoing)
        {
            existing.ham = existing.ham.add(&ray.ham);
            if existing.ham.is_zero() {
                self.rays.retain(|r| !r.ham.is_zero());
            }
            return Ok(());
        }
        self.rays.push(ray);
        self.sort_rays();
        Ok(())
    }

    /// Deterministic order: by angle of the support direction, ingoing first
    /// on ties (collinear Hamiltonians commute, so ties are harmless).
    fn sort_rays(&mut self) {
        self.rays
            .sort_by(|a, b| a.dir.angle_cmp(&b.dir).then(b.ingoing.cmp(&a.ingoing)));
    }

    /// Hamiltonian of the outgoing ray along R_{>=0} m, or zero if absent.
    pub fn get_ray(&self, m: &LatticeVec) -> Result<TorusElement> {
        if !m.is_primitive() {
            return Err(Error::Precondition(format!(
                "direction must be primitive: {m}"
            )));
        }
        Ok(self
            .rays
            .iter()
            .find(|r| !r.ingoing && r.dir == *m)
            .map(|r| r.ham.clone())
            .unwrap_or_else(|| TorusElement::zero(self.ctx.clone())))
    }

    /// Group element of the path-ordered product around an anticlockwise loop
    /// with base cut just clockwise of direction (1,0): the first-crossed ray
    /// is the rightmost factor.
    pub fn loop_product(&self) -> Result<TorusElement> {
        // rays are kept sorted by crossing angle
        let exps: Vec<TorusElement> = self
            .rays
            .par_iter()
            .map(|ray| {
                let h = if ray.epsilon() > 0 {
                    ray.ham.clone()
                } else {
                    ray.ham.neg()
                };
                h.exp()
            })
            .collect::<Result<_>>()?;
        let mut g = TorusElement::one(self.ctx.clone());
        for e in exps {
            g = e.mul(&g)?;
        }
        Ok(g)
    }

    /// True iff log(loop_product) has no noncentral term of order <= l.
    pub fn is_consistent(&self, l: u32) -> Result<bool> {
        if l > self.ctx.order {
            return Err(Error::Precondition(format!(
                "consistency order {l} exceeds truncation {}",
                self.ctx.order
            )));
        }
        let log = self.loop_product()?.log()?.noncentral_part();
        Ok(log.min_order().is_none_or(|o| o > l))
    }

    /// Re-truncates the whole diagram into a lower-order context.
    pub fn truncated(&self, order: u32) -> ScatteringDiagram {
        let ctx = self.ctx.with_order(order);
        let rays = self
            .rays
            .iter()
            .filter_map(|r| {
                let ham = r.ham.into_ctx(&ctx);
                if ham.is_zero() {
                    None
                } else {
                    Some(Ray {
                        dir: r.dir,
                        ingoing: r.ingoing,
                        ham,
                    })
                }
            })
            .collect();
        ScatteringDiagram { ctx, rays }
    }

    /// Canonical consistent completion by outgoing rays (order by order up to
    /// the context truncation).
    pub fn complete(&self) -> Result<ScatteringDiagram> {
        Ok(self.complete_with_report()?.0)
    }

    pub fn complete_with_report(&self) -> Result<(ScatteringDiagram, CompletionReport)> {
        let mut working = self.clone();
        let mut report = CompletionReport::default();
        let full_order = self.ctx.order;
        for l in 1..=full_order {
            // work at truncation l: the order-l defect is unaffected by
            // higher-order terms and the algebra is much cheaper
            let stage = working.truncated(l);
            let log = stage.loop_product()?.log()?;
            let noncentral = log.noncentral_part();
            report.central_discarded += log.num_terms() - noncentral.num_terms();
            let defect = noncentral.homogeneous_part(l);
            if defect.is_zero() {
                continue;
            }
            // group the order-l defect by the primitive direction of r(p)
            let mut groups: BTreeMap<LatticeVec, TorusElement> = BTreeMap::new();
            for (p, c) in defect.iter() {
                let dir = working.ctx.r_of(p).primitive();
                groups
                    .entry(dir)
                    .or_insert_with(|| TorusElement::zero(working.ctx.clone()))
                    .add_term(p.clone(), c.clone());
            }
            let negative = match report.negative_correction {
                Some(v) => v,
                None => {
                    let v = Self::validate_sign(&stage, &groups)?;
                    report.negative_correction = Some(v);
                    v
                }
            };
            for (dir, h) in groups {
                let correction = if negative { h.neg() } else { h };
                working.add_ray(Ray::new(dir, false, correction)?)?;
            }
            if !working.truncated(l).is_consistent(l)? {
                return Err(Error::Internal(format!(
                    "completion failed to restore consistency at order {l}"
                )));
            }
        }
        Ok((working, report))
    }

    /// Validates the correction sign convention on the first nontrivial
    /// order: tries -H, falls back to +H. The loop orientation fixed in
    /// loop_product makes -H correct; this check guards the convention.
    fn validate_sign(
        stage: &ScatteringDiagram,
        groups: &BTreeMap<LatticeVec, TorusElement>,
    ) -> Result<bool> {
        for negative in [true, false] {
            let mut candidate = stage.clone();
            for (dir, h) in groups {
                let h = h.into_ctx(candidate.ctx());
                let correction = if negative { h.neg() } else { h };
                candidate.add_ray(Ray::new(*dir, false, correction)?)?;
            }
            let l = stage.ctx.order;
            if candidate.is_consistent(l)? {
                return Ok(negative);
            }
        }
        Err(Error::Internal(
            "neither correction sign restores consistency".into(),
        ))
    }
}

/// Builds the standard initial diagram: ingoing rays -R_{>=0} m_j with
/// Hamiltonians sum_l (1/l) (-1)^{l-1}/(q^{r_j l/2} - q^{-r_j l/2})
/// t_j^{r_j l} zhat^{r_j l m_j}, truncated at the context order.
pub fn standard_diagram(ctx: &Arc<Context>) -> Result<ScatteringDiagram> {
    use crate::exactring::{Rat, RatFuncQ, SLaurent};
    let mut d = ScatteringDiagram::new(ctx.clone());
    for (j, m) in ctx.m_tuple.iter().enumerate() {
        let r = ctx.r_tuple[j] as i64;
        let mut ham = TorusElement::zero(ctx.clone());
        let mut l = 1i64;
        while (r * l) as u32 <= ctx.order {
            let sign = if l % 2 == 1 { 1 } else { -1 };
            let coeff = RatFuncQ::new(
                SLaurent::constant(Rat::from_frac(sign, l)),
                RatFuncQ::s_pow_minus_inv(r * l),
            );
            ham.add_term(PIndex::unit(ctx.n(), j).scale((r * l) as u32), coeff);
            l += 1;
        }
        d.add_ray(Ray::new(m.neg(), true, ham)?)?;
    }
    Ok(d)
}

/// Coefficientwise twist by sigma_P, flipping the algebra to its twisted
/// form (or back).
pub fn to_twisted(d: &ScatteringDiagram) -> ScatteringDiagram {
    let ctx = d.ctx().with_twisted(!d.ctx().twisted);
    let rays = d
        .rays()
        .iter()
        .map(|r| Ray {
            dir: r.dir,
            ingoing: r.ingoing,
            ham: r.ham.twist_coefficients().into_ctx(&ctx),
        })
        .collect();
    ScatteringDiagram { ctx, rays }
}

pub mod json {
    //! Serde face of a scattering diagram: context plus rays, torus elements
    //! as term lists sorted lexicographically by p.

    use super::*;
    use crate::exactring::RatFuncQ;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    pub struct TermJson {
        pub p: Vec<u32>,
        pub coeff: RatFuncQ,
    }

    #[derive(Serialize, Deserialize)]
    pub struct RayJson {
        pub dir: [i64; 2],
        pub ingoing: bool,
        pub ham: Vec<TermJson>,
    }

    #[derive(Serialize, Deserialize)]
    pub struct ContextJson {
        pub m: Vec<[i64; 2]>,
        pub r: Vec<u32>,
        pub order: u32,
        pub twisted: bool,
    }

    #[derive(Serialize, Deserialize)]
    pub struct DiagramJson {
        pub context: ContextJson,
        pub rays: Vec<RayJson>,
    }

    pub fn element_terms(e: &TorusElement) -> Vec<TermJson> {
        e.iter()
            .map(|(p, c)| TermJson {
                p: p.0.clone(),
                coeff: c.clone(),
            })
            .collect()
    }

    impl From<&ScatteringDiagram> for DiagramJson {
        fn from(d: &ScatteringDiagram) -> Self {
            DiagramJson {
                context: ContextJson {
                    m: d.ctx().m_tuple.iter().map(|m| [m.x, m.y]).collect(),
                    r: d.ctx().r_tuple.clone(),
                    order: d.ctx().order,
                    twisted: d.ctx().twisted,
                },
                rays: d
                    .rays()
                    .iter()
                    .map(|r| RayJson {
                        dir: [r.dir.x, r.dir.y],
                        ingoing: r.ingoing,
                        ham: element_terms(&r.ham),
                    })
                    .collect(),
            }
        }
    }

    impl DiagramJson {
        pub fn into_diagram(self) -> Result<ScatteringDiagram> {
            let mut ctx = (*Context::new(
                self.context
                    .m
                    .iter()
                    .map(|&[x, y]| LatticeVec::new(x, y))
                    .collect(),
                self.context.r.clone(),
                self.context.order,
            ))
            .clone();
            ctx.twisted = self.context.twisted;
            let ctx = std::sync::Arc::new(ctx);
            let mut d = ScatteringDiagram::new(ctx.clone());
            for ray in self.rays {
                let mut ham = TorusElement::zero(ctx.clone());
                for term in ray.ham {
                    ham.add_term(PIndex(term.p), term.coeff);
                }
                d.add_ray(Ray::new(
                    LatticeVec::new(ray.dir[0], ray.dir[1]),
                    ray.ingoing,
                    ham,
                )?)?;
            }
            Ok(d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{quantum_integer, Rat, RatFuncQ, SLaurent};

    fn ctx_m(m: &[(i64, i64)], order: u32) -> Arc<Context> {
        Context::plain(
            m.iter().map(|&(x, y)| LatticeVec::new(x, y)).collect(),
            order,
        )
    }

    #[test]
    fn empty_diagram_loop_is_identity() {
        let ctx = ctx_m(&[(1, 0)], 3);
        let d = ScatteringDiagram::new(ctx.clone());
        assert_eq!(d.loop_product().unwrap(), TorusElement::one(ctx));
    }

    #[test]
    fn matched_in_out_pair_is_consistent() {
        let ctx = ctx_m(&[(1, 0)], 4);
        let input = standard_diagram(&ctx).unwrap();
        let mut d = input.clone();
        let ham = input.rays()[0].ham.clone();
        d.add_ray(Ray::new(LatticeVec::new(1, 0), false, ham).unwrap())
            .unwrap();
        assert_eq!(d.loop_product().unwrap(), TorusElement::one(ctx.clone()));
        assert!(d.is_consistent(4).unwrap());
    }

    #[test]
    fn propagation_completes_with_one_outgoing_ray() {
        let ctx = ctx_m(&[(1, 0)], 5);
        let input = standard_diagram(&ctx).unwrap();
        let completed = input.complete().unwrap();
        let outgoing: Vec<_> = completed.outgoing_rays().collect();
        assert_eq!(outgoing.len(), 1);
        assert_eq!(outgoing[0].dir, LatticeVec::new(1, 0));
        assert_eq!(outgoing[0].ham, input.rays()[0].ham);
        // ingoing rays preserved
        assert_eq!(completed.ingoing_rays().count(), 1);
        assert!(completed.is_consistent(5).unwrap());
    }

    #[test]
    fn pentagon_order2_defect_sits_at_p11() {
        // two ingoing rays plus their straight propagations, no (1,1) ray yet
        let ctx = ctx_m(&[(1, 0), (0, 1)], 2);
        let mut d = standard_diagram(&ctx).unwrap();
        for ray in standard_diagram(&ctx).unwrap().rays() {
            d.add_ray(Ray::new(ray.dir.neg(), false, ray.ham.clone()).unwrap())
                .unwrap();
        }
        assert!(d.is_consistent(1).unwrap());
        assert!(!d.is_consistent(2).unwrap());
        let log = d.loop_product().unwrap().log().unwrap().noncentral_part();
        let order2 = log.homogeneous_part(2);
        let nonzero: Vec<_> = order2.iter().collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].0, &PIndex(vec![1, 1]));
    }

    #[test]
    fn pentagon_completion_has_three_outgoing_rays() {
        let ctx = ctx_m(&[(1, 0), (0, 1)], 6);
        let completed = standard_diagram(&ctx).unwrap().complete().unwrap();
        let mut dirs: Vec<_> = completed.outgoing_rays().map(|r| r.dir).collect();
        dirs.sort_by(|a, b| a.angle_cmp(b));
        assert_eq!(
            dirs,
            vec![
                LatticeVec::new(1, 0),
                LatticeVec::new(1, 1),
                LatticeVec::new(0, 1),
            ]
        );
        // H_{(1,1)} = sum_l (1/l)((-1)^{l-1}/(s^l - s^{-l})) t1^l t2^l
        let h11 = completed.get_ray(&LatticeVec::new(1, 1)).unwrap();
        for l in 1..=3i64 {
            let sign = if l % 2 == 1 { 1 } else { -1 };
            let expect = RatFuncQ::new(
                SLaurent::constant(Rat::from_frac(sign, l)),
                RatFuncQ::s_pow_minus_inv(l),
            );
            assert_eq!(h11.coeff(&PIndex(vec![l as u32, l as u32])), expect);
        }
        // absent direction reads as zero
        assert!(completed.get_ray(&LatticeVec::new(1, -1)).unwrap().is_zero());
        assert!(completed.get_ray(&LatticeVec::new(2, 1)).unwrap().is_zero());
        // non-primitive direction is rejected
        assert!(completed.get_ray(&LatticeVec::new(2, 2)).is_err());
    }

    #[test]
    fn kronecker2_completion_coefficient() {
        let ctx = ctx_m(&[(1, 1), (-1, 1)], 2);
        let completed = standard_diagram(&ctx).unwrap().complete().unwrap();
        let h = completed.get_ray(&LatticeVec::new(0, 1)).unwrap();
        let expect = RatFuncQ::new(quantum_integer(2), RatFuncQ::s_pow_minus_inv(1));
        assert_eq!(h.coeff(&PIndex(vec![1, 1])), expect);
    }

    #[test]
    fn completion_is_idempotent() {
        let ctx = ctx_m(&[(1, 0), (0, 1)], 4);
        let once = standard_diagram(&ctx).unwrap().complete().unwrap();
        let twice = once.complete().unwrap();
        assert_eq!(once.rays().len(), twice.rays().len());
        for (a, b) in once.rays().iter().zip(twice.rays()) {
            assert_eq!(a.dir, b.dir);
            assert_eq!(a.ingoing, b.ingoing);
            assert_eq!(a.ham, b.ham);
        }
    }

    #[test]
    fn completion_commutes_with_truncation() {
        let ctx6 = ctx_m(&[(1, 0), (0, 1)], 6);
        let ctx4 = ctx_m(&[(1, 0), (0, 1)], 4);
        let at6 = standard_diagram(&ctx6).unwrap().complete().unwrap();
        let at4 = standard_diagram(&ctx4).unwrap().complete().unwrap();
        let truncated = at6.truncated(4);
        for ray in at4.rays() {
            let other = if ray.ingoing {
                truncated
                    .ingoing_rays()
                    .find(|r| r.dir == ray.dir)
                    .map(|r| r.ham.clone())
                    .unwrap()
            } else {
                truncated.get_ray(&ray.dir).unwrap()
            };
            assert_eq!(ray.ham, other.into_ctx(ray.ham.ctx()));
        }
    }

    #[test]
    fn non_half_plane_completion_is_consistent() {
        let ctx = ctx_m(&[(1, 0), (0, 1), (-1, -1)], 3);
        let (completed, report) = standard_diagram(&ctx)
            .unwrap()
            .complete_with_report()
            .unwrap();
        assert!(completed.is_consistent(3).unwrap());
        assert_eq!(report.negative_correction, Some(true));
        // completion only adds outgoing rays
        assert_eq!(completed.ingoing_rays().count(), 3);
    }

    #[test]
    fn central_log_part_acts_trivially() {
        // non-half-plane directions can generate central terms r(p) = 0
        let ctx = ctx_m(&[(1, 0), (0, 1), (-1, -1)], 3);
        let completed = standard_diagram(&ctx).unwrap().complete().unwrap();
        let log = completed.loop_product().unwrap().log().unwrap();
        assert!(log.noncentral_part().is_zero());
        let central = log.central_part();
        // adjoint by any central element is the identity, so discarding the
        // central part of the loop log is safe
        let mut f = TorusElement::zero(ctx.clone());
        f.add_term(PIndex(vec![1, 0, 0]), RatFuncQ::one());
        f.add_term(PIndex(vec![2, 1, 0]), RatFuncQ::s_pow(1));
        if !central.is_zero() {
            assert_eq!(TorusElement::adjoint(&central, &f).unwrap(), f);
        }
        // an explicitly central element also acts trivially
        let c = TorusElement::monomial(ctx.clone(), PIndex(vec![1, 1, 1]), RatFuncQ::one());
        assert!(ctx.r_of(&PIndex(vec![1, 1, 1])).is_zero());
        assert_eq!(TorusElement::adjoint(&c, &f).unwrap(), f);
    }

    #[test]
    fn orbifold_propagation() {
        let ctx = Context::new(vec![LatticeVec::new(1, 0)], vec![2], 4);
        let input = standard_diagram(&ctx).unwrap();
        // support only at p divisible by 2, coefficient 1/(s^2 - s^-2) at p=(2)
        let ham = &input.rays()[0].ham;
        assert_eq!(
            ham.coeff(&PIndex(vec![2])),
            RatFuncQ::new(SLaurent::one(), RatFuncQ::s_pow_minus_inv(2))
        );
        assert!(ham.coeff(&PIndex(vec![1])).is_zero());
        assert_eq!(
            ham.coeff(&PIndex(vec![4])),
            RatFuncQ::new(
                SLaurent::constant(Rat::from_frac(-1, 2)),
                RatFuncQ::s_pow_minus_inv(4)
            )
        );
        let completed = input.complete().unwrap();
        let out = completed.get_ray(&LatticeVec::new(1, 0)).unwrap();
        assert_eq!(&out, ham);
    }

    #[test]
    fn diagram_json_round_trip() {
        let ctx = ctx_m(&[(1, 0), (0, 1)], 4);
        let d = standard_diagram(&ctx).unwrap().complete().unwrap();
        let encoded = serde_json::to_string(&json::DiagramJson::from(&d)).unwrap();
        let decoded: json::DiagramJson = serde_json::from_str(&encoded).unwrap();
        let back = decoded.into_diagram().unwrap();
        assert_eq!(back.rays().len(), d.rays().len());
        for (a, b) in d.rays().iter().zip(back.rays()) {
            assert_eq!(a.dir, b.dir);
            assert_eq!(a.ingoing, b.ingoing);
            assert_eq!(a.ham, b.ham);
        }
        // deterministic bytes
        let encoded2 = serde_json::to_string(&json::DiagramJson::from(&back)).unwrap();
        assert_eq!(encoded, encoded2);
    }

    #[test]
    fn twist_commutes_with_completion() {
        for m in [vec![(1, 0), (0, 1)], vec![(1, 1), (-1, 1)]] {
            let ctx = ctx_m(&m, 4);
            let input = standard_diagram(&ctx).unwrap();
            let path_a = to_twisted(&input.complete().unwrap());
            let path_b = to_twisted(&input).complete().unwrap();
            assert_eq!(path_a.rays().len(), path_b.rays().len());
            for ray in path_a.rays() {
                let other = if ray.ingoing {
                    path_b
                        .ingoing_rays()
                        .find(|r| r.dir == ray.dir)
                        .unwrap()
                        .ham
                        .clone()
                } else {
                    path_b.get_ray(&ray.dir).unwrap()
                };
                assert_eq!(ray.ham, other, "direction {} differs", ray.dir);
            }
        }
    }
}
