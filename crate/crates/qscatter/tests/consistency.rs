//! Cross-route consistency: the perturbed square-zero scattering summed per
//! asymptotic direction reproduces the origin completion exactly, and the
//! degeneration identity skips precisely the excluded directions.

use qscatter::invariants::{self, CheckOutcome};
use qscatter::qtorus::{Context, LatticeVec, PIndex};
use qscatter::scatter::standard_diagram;
use qscatter::tropical::build_perturbed;
use std::sync::Arc;

fn plain_ctx(m: &[(i64, i64)], order: u32) -> Arc<Context> {
    Context::plain(
        m.iter().map(|&(x, y)| LatticeVec::new(x, y)).collect(),
        order,
    )
}

#[test]
fn asymptotic_sums_reproduce_origin_completion() {
    for m in [&[(1, 0), (0, 1)][..], &[(1, 1), (-1, 1)][..]] {
        let ctx = plain_ctx(m, 4);
        let completed = standard_diagram(&ctx).unwrap().complete().unwrap();
        let mut perturbed = build_perturbed(&ctx, 7).unwrap();
        perturbed.propagate_to_order(4).unwrap();

        // every outgoing direction of the completion, plus directions that
        // must stay empty on both sides
        let mut dirs: Vec<LatticeVec> = completed.outgoing_rays().map(|r| r.dir).collect();
        dirs.push(LatticeVec::new(1, -1));
        dirs.push(completed.ctx().m_tuple[0].neg());
        for dir in dirs {
            let origin = completed.get_ray(&dir).unwrap();
            let asymptotic = perturbed.asymptotic_element(&dir);
            assert_eq!(origin, asymptotic, "direction {dir} for m = {m:?}");
        }
    }
}

#[test]
fn kronecker3_classical_bps_values() {
    // the wild two-vertex quiver with three arrows: the q = 1 specializations
    // of the BPS invariants are the classically known Euler numbers, and the
    // small classes have known smooth moduli
    let ctx = plain_ctx(&[(1, 1), (-1, 2)], 5);
    let d = standard_diagram(&ctx).unwrap().complete().unwrap();
    let expect = [
        (vec![1u32, 1], 3i64),
        (vec![2, 1], 3),
        (vec![1, 2], 3),
        (vec![3, 1], 1),
        (vec![2, 2], -6),
        (vec![3, 2], 13),
        (vec![2, 3], 13),
    ];
    for (p, chi) in expect {
        let rec = invariants::bps_record(&d, &PIndex(p.clone())).unwrap();
        assert!(rec.verdict.passes(), "omega at {p:?} not integral");
        assert_eq!(
            rec.omega.num().eval_one(),
            qscatter::exactring::Rat::from_int(chi),
            "chi at {p:?}"
        );
    }
    // the primitive diagonal class carries the projective plane
    let rec = invariants::bps_record(&d, &PIndex(vec![1, 1])).unwrap();
    assert_eq!(
        rec.omega,
        qscatter::exactring::RatFuncQ::from_laurent(qscatter::exactring::quantum_integer(3))
    );
}

#[test]
fn degeneration_skips_excluded_directions() {
    // with opposite incoming directions, p = (0,1) has m_p = -m_1: the
    // simplifying assumption fails and the check reports Skipped
    let ctx = plain_ctx(&[(1, 0), (-1, 0)], 2);
    let completed = standard_diagram(&ctx).unwrap().complete().unwrap();
    let mut perturbed = build_perturbed(&ctx, 11).unwrap();
    perturbed.propagate_to_order(2).unwrap();
    assert_eq!(
        invariants::degeneration_check(&completed, &perturbed, &PIndex(vec![0, 1]), 1).unwrap(),
        CheckOutcome::Skipped
    );
    // the opposite side is excluded as well: m_(1,0) = -m_2
    assert_eq!(
        invariants::degeneration_check(&completed, &perturbed, &PIndex(vec![1, 0]), 1).unwrap(),
        CheckOutcome::Skipped
    );
}
