mod common;

use common::{quad_irr, rational_gamma, rational_tau, silver};
use dioset::contfrac::expand;
use dioset::diocore::{
    brute_force_member, is_member, lemma_check, lemma_lhs, translate, DiophParams, MembershipVerdict,
    OracleOutcome, Point, Refutation, Settings,
};
use dioset::exactnum::{Exponent, QuadNum};
use dioset::par::Exec;
use proptest::prelude::*;
use std::cmp::Ordering;

fn settings() -> Settings {
    Settings::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn membership_is_translation_invariant(x in quad_irr(), g in rational_gamma(), t in rational_tau(), k in -20i64..20) {
        let params = DiophParams::new(g, t).unwrap();
        let a = is_member(&x, &params, &settings()).unwrap();
        let b = is_member(&translate(&x, k), &params, &settings()).unwrap();
        prop_assert_eq!(a.kind(), b.kind());
        prop_assert_eq!(a.witness_k(), b.witness_k());
    }

    #[test]
    fn verdicts_agree_with_oracle(x in quad_irr(), g in rational_gamma(), t in rational_tau()) {
        let params = DiophParams::new(g, t).unwrap();
        let v = is_member(&x, &params, &settings()).unwrap();
        let pt = Point::Exact(x.clone());
        match &v {
            MembershipVerdict::Member(_) => {
                let o = brute_force_member(&pt, &params, 2000, &settings()).unwrap();
                prop_assert_eq!(o, OracleOutcome::Consistent { q_max: 2000 });
            }
            MembershipVerdict::NotMember(Refutation::Lemma { k, .. }) => {
                let q = expand(&x, 1 << 20).unwrap().q(*k as i64 + 1).unwrap();
                let q: u64 = q.try_into().unwrap_or(u64::MAX);
                // the oracle walks every q up to the witness denominator
                prop_assume!(q <= 100_000);
                let o = brute_force_member(&pt, &params, q, &settings()).unwrap();
                prop_assert!(o.is_excluded(), "k={} q={} {:?}", k, q, o);
            }
            MembershipVerdict::NotMember(Refutation::Rational { .. }) => prop_assert!(false, "irrational input"),
            MembershipVerdict::Unknown { .. } => {}
        }
    }

    #[test]
    fn tail_certificates_hold_past_the_tail(x in quad_irr(), g in rational_gamma(), t in rational_tau()) {
        let params = DiophParams::new(g, t).unwrap();
        if let MembershipVerdict::Member(cert) = is_member(&x, &params, &settings()).unwrap() {
            let cf = expand(&x, 1 << 20).unwrap();
            for k in cert.k_tail..cert.k_tail + 40 {
                let c = lemma_check(&cf, k, &params, &settings().policy).unwrap();
                prop_assert_ne!(c, Some(Ordering::Greater), "k={}", k);
            }
        }
    }

    #[test]
    fn wide_gamma_empties_at_q_one(x in quad_irr(), num in 51i64..300) {
        let params = DiophParams::new(QuadNum::from_ratio(num, 100), Exponent::integer(2).unwrap()).unwrap();
        let o = brute_force_member(&Point::Exact(x), &params, 1, &settings()).unwrap();
        prop_assert!(matches!(o, OracleOutcome::Excluded { q: 1, .. }), "{:?}", o);
    }

    #[test]
    fn oracle_is_mode_independent(x in quad_irr(), g in rational_gamma(), t in rational_tau()) {
        let params = DiophParams::new(g, t).unwrap();
        let pt = Point::Exact(x);
        let s = brute_force_member(&pt, &params, 300, &settings().with_exec(Exec::Sequential)).unwrap();
        let p = brute_force_member(&pt, &params, 300, &settings().with_exec(Exec::Parallel)).unwrap();
        prop_assert_eq!(s, p);
    }
}

#[test]
fn half_gamma_leaves_only_half_integers_to_q_two() {
    let params = DiophParams::new(QuadNum::from_ratio(1, 2), Exponent::integer(2).unwrap()).unwrap();
    let o = brute_force_member(&Point::Exact(QuadNum::from_ratio(1, 2)), &params, 2, &settings()).unwrap();
    assert!(matches!(o, OracleOutcome::Excluded { q: 2, .. }));
}

#[test]
fn silver_criterion_at_zero_is_inverse_gamma() {
    for n in 2..=10 {
        let alpha = silver(n);
        let gamma = alpha.inv().unwrap();
        let tau = Exponent::log_ratio(alpha.clone(), n).unwrap();
        let params = DiophParams::new(gamma, tau).unwrap();
        let cf = expand(&alpha, 1 << 20).unwrap();
        let lhs = lemma_lhs(&cf, 0, &params, 128).unwrap();
        assert_eq!(lhs.exact(), Some(&alpha), "n={n}");
    }
}
