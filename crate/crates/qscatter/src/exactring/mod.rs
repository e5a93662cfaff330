//! Exact coefficient arithmetic: rationals, Laurent polynomials and rational
//! functions in s = q^{1/2}, truncated hbar-series, number-theoretic helpers.

pub mod hbar;
pub mod laurent;
pub mod rat;
pub mod ratfunc;

pub use hbar::{classical_limit, expand_hbar, HbarSeries};
pub use laurent::SLaurent;
pub use rat::{divisors, gcd_i64, gcd_u64, mobius, GaussRat, Rat};
pub use ratfunc::{
    laurent_gcd, quantum_integer, quantum_integer_signed, IntegralityVerdict, RatFuncQ,
};

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rat::from_frac(n, d))
    }

    fn arb_laurent() -> impl Strategy<Value = SLaurent> {
        proptest::collection::vec((-4i64..=4, arb_rat()), 0..4)
            .prop_map(|terms| SLaurent::from_terms(terms.into_iter().map(|(e, c)| (2 * e, c))))
    }

    fn arb_ratfunc() -> impl Strategy<Value = RatFuncQ> {
        (arb_laurent(), arb_laurent()).prop_map(|(n, d)| {
            let den = if d.is_zero() { SLaurent::one() } else { d };
            RatFuncQ::new(n, den)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb_ratfunc(), b in arb_ratfunc(), c in arb_ratfunc()) {
            // associativity
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            // commutativity
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            // distributivity
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            // division inverts multiplication
            if !b.is_zero() {
                prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a.clone());
            }
        }

        #[test]
        fn expand_hbar_is_a_ring_homomorphism(a in arb_ratfunc(), b in arb_ratfunc()) {
            let t = 4;
            let ea = expand_hbar(&a, t).unwrap();
            let eb = expand_hbar(&b, t).unwrap();
            let eab = expand_hbar(&a.mul(&b), t).unwrap();
            prop_assert!(eab.agrees_with(&ea.mul(&eb)));
            let esum = expand_hbar(&a.add(&b), t).unwrap();
            prop_assert!(esum.agrees_with(&ea.add(&eb)));
        }

        #[test]
        fn symmetric_expansion_is_real_and_even(f in arb_ratfunc()) {
            let sym = f.add(&f.invert_s());
            if !sym.is_zero() {
                prop_assert!(sym.is_symmetric());
                let e = expand_hbar(&sym, 5).unwrap();
                for k in e.valuation()..=5 {
                    let c = e.coeff(k);
                    prop_assert!(c.is_real());
                    if k.rem_euclid(2) == 1 {
                        prop_assert!(c.is_zero());
                    }
                }
            }
        }
    }
}
