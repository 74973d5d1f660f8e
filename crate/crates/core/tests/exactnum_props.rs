mod common;

use std::cmp::Ordering;

use common::quad_irr;
use dioset::exactnum::{
    parse_quad, power_enclosure, qi_compare, rational::ratio, Exponent, QuadNum,
};
use num_bigint::BigInt;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn compare_matches_floats(x in quad_irr(), y in quad_irr()) {
        let (fx, fy) = (x.to_f64(), y.to_f64());
        if (fx - fy).abs() > 1e-6 {
            prop_assert_eq!(qi_compare(&x, &y), fx.partial_cmp(&fy).unwrap());
        }
        prop_assert_eq!(qi_compare(&x, &y), qi_compare(&y, &x).reverse());
    }

    #[test]
    fn compare_is_transitive(x in quad_irr(), y in quad_irr(), z in quad_irr()) {
        let mut v = [x, y, z];
        v.sort_by(qi_compare);
        prop_assert_ne!(qi_compare(&v[0], &v[1]), Ordering::Greater);
        prop_assert_ne!(qi_compare(&v[1], &v[2]), Ordering::Greater);
        prop_assert_ne!(qi_compare(&v[0], &v[2]), Ordering::Greater);
    }

    #[test]
    fn inverse_and_mobius_round_trip(x in quad_irr(), a in -5i64..5, b in -5i64..5) {
        prop_assert_eq!(x.inv().unwrap().inv().unwrap(), x.clone());
        // (a b; c d) with det 1: take (a, b; a*k + ... ) via (1 a; 0 1)(1 0; b 1)
        let m = [1 + a * b, a, b, 1];
        let y = x.mobius(m[0], m[1], m[2], m[3]);
        if let Ok(y) = y {
            // inverse of (p q; r s) with det 1 is (s -q; -r p)
            let back = y.mobius(m[3], -m[1], -m[2], m[0]).unwrap();
            prop_assert_eq!(back, x);
        }
    }

    #[test]
    fn floor_brackets(x in quad_irr()) {
        let f = QuadNum::from_int(x.floor());
        prop_assert!(f <= x);
        prop_assert!(x < &f + &QuadNum::one());
    }

    #[test]
    fn text_round_trip(x in quad_irr()) {
        prop_assert_eq!(parse_quad(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn power_enclosures_nest(q in 2u64..500, n in 1i64..=12, d in 1i64..=5) {
        let t = Exponent::rational(ratio(n + d, d)).unwrap();
        let qb = BigInt::from(q);
        for p in [64u32, 128, 256] {
            let coarse = power_enclosure(&qb, &t, p).enclose(p);
            let fine = power_enclosure(&qb, &t, 2 * p).enclose(2 * p);
            prop_assert!(fine.is_within(&coarse), "q={} t={} p={}", q, t, p);
        }
    }
}
