use bvpcf_core::bvp::{cubic_forms, remainder_routes};
use bvpcf_core::cf::{determinant, norm_form, scaled_error};
use bvpcf_core::{
    expand, theta_enclosure, AlphaEnclosure, PrecisionPolicy, RadicandSpec, Rational, RationalInterval, Side,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use proptest::prelude::*;
use std::cmp::Ordering;

fn valid_spec() -> impl Strategy<Value = RadicandSpec> {
    (2u64..400, 2u32..9).prop_filter_map("perfect power", |(k, m)| RadicandSpec::new(k, m).ok())
}

fn cubic_spec() -> impl Strategy<Value = RadicandSpec> {
    (2u64..400).prop_filter_map("perfect cube", |k| RadicandSpec::new(k, 3).ok())
}

/// Enough bits for every index up to `n` of an expansion with precision `used`.
fn bits_for(used: u64) -> u64 {
    used.max(64) * 2
}

fn half(x: &Rational) -> Rational {
    x / Rational::from_integer(2.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convergent_structure(spec in valid_spec(), n_terms in 2usize..30) {
        let e = expand(&spec, n_terms, &PrecisionPolicy::default()).unwrap();
        for n in 0..=n_terms {
            let c = &e.terms[n];
            prop_assert_eq!(determinant(c, e.previous(n)), BigInt::one());
            if n >= 1 {
                prop_assert!(c.b >= BigInt::one());
                prop_assert_ne!(c.side, e.terms[n - 1].side);
            }
            let expected = if n % 2 == 0 { Side::Below } else { Side::Above };
            prop_assert_eq!(c.side, expected);
            prop_assert_eq!(norm_form(&spec, c).is_positive(), c.side == Side::Above);
        }
    }

    #[test]
    fn universal_identity_enclosures_agree(spec in valid_spec(), n_terms in 2usize..25) {
        let e = expand(&spec, n_terms, &PrecisionPolicy::default()).unwrap();
        let base = bits_for(e.precision_used);
        for n in 0..n_terms {
            let (c, prev) = (&e.terms[n], e.previous(n));
            let ratio = Rational::new(prev.map_or(BigInt::from(0), |p| p.q.clone()), c.q.clone());
            let mut last: Option<(RationalInterval, RationalInterval)> = None;
            for bits in [base, 2 * base] {
                let alpha = AlphaEnclosure::with_bits(spec, bits);
                let lhs = theta_enclosure(&spec, c, prev, &alpha).unwrap().interval.shift(&ratio);
                let rhs = scaled_error(c, &alpha).unwrap().recip().unwrap();
                prop_assert!(lhs.overlaps(&rhs));
                if let Some((l0, r0)) = &last {
                    prop_assert!(lhs.is_subset_of(l0) || lhs.width() <= l0.width());
                    prop_assert!(lhs.overlaps(l0) && rhs.overlaps(r0));
                    prop_assert!(lhs.width() <= half(&l0.width()));
                    prop_assert!(rhs.width() <= half(&r0.width()));
                }
                last = Some((lhs, rhs));
            }
        }
    }

    #[test]
    fn remainder_routes_intersect_and_shrink(spec in valid_spec(), n_terms in 2usize..25) {
        let e = expand(&spec, n_terms, &PrecisionPolicy::default()).unwrap();
        let base = bits_for(e.precision_used);
        for n in 1..n_terms {
            let (c, prev) = (&e.terms[n], e.previous(n));
            let coarse = remainder_routes(&spec, c, prev, &AlphaEnclosure::with_bits(spec, base)).unwrap();
            let fine = remainder_routes(&spec, c, prev, &AlphaEnclosure::with_bits(spec, 2 * base)).unwrap();
            prop_assert!(coarse.from_correction.overlaps(&coarse.from_theta));
            prop_assert!(fine.from_correction.overlaps(&fine.from_theta));
            prop_assert!(fine.from_correction.width() <= half(&coarse.from_correction.width()));
            prop_assert!(fine.from_theta.width() <= half(&coarse.from_theta.width()));
        }
    }

    #[test]
    fn cubic_lemma_forms_and_sign(spec in cubic_spec(), n_terms in 2usize..30) {
        let e = expand(&spec, n_terms, &PrecisionPolicy::default()).unwrap();
        let alpha = AlphaEnclosure::with_bits(spec, bits_for(e.precision_used));
        let alpha_lo = alpha.interval().lo().to_f64().unwrap();
        for n in 0..n_terms {
            let c = &e.terms[n];
            let forms = cubic_forms(&spec, c, &alpha).unwrap();
            prop_assert!(forms.closed.overlaps(&forms.defining));
            let exact_sign = if norm_form(&spec, c).is_positive() { Ordering::Greater } else { Ordering::Less };
            prop_assert_eq!(forms.defining.sign(), Some(exact_sign));
            prop_assert_eq!(forms.closed.sign(), Some(exact_sign));
            if n >= 2 {
                // |V_n| q_n^2 -> 1/alpha; stays under 2/alpha + 1
                let q2 = Rational::from_integer(&c.q * &c.q);
                let scaled = forms.closed.abs().scale(&q2);
                prop_assert!(scaled.hi().to_f64().unwrap() < 2.0 / alpha_lo + 1.0);
            }
        }
    }
}
