#![allow(dead_code)]

use dioset::exactnum::{qi_make, rational::ratio, Exponent, QuadNum};
use proptest::prelude::*;
use rand::Rng;

pub const NONSQUARES: &[i64] = &[2, 3, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30, 31, 37, 41, 43];

pub fn quad_irr() -> impl Strategy<Value = QuadNum> {
    (
        -30i64..=30,
        prop_oneof![-6i64..=-1, 1i64..=6],
        1i64..=12,
        prop::sample::select(NONSQUARES),
    )
        .prop_map(|(a, b, c, d)| qi_make(a, b, c, d).unwrap())
}

pub fn rational_gamma() -> impl Strategy<Value = QuadNum> {
    (1i64..100).prop_map(|k| QuadNum::from_ratio(k, 200))
}

/// Rational `tau` in `[1, 3]` with denominator at most 4.
pub fn rational_tau() -> impl Strategy<Value = Exponent> {
    (1i64..=4)
        .prop_flat_map(|d| (Just(d), d..=3 * d))
        .prop_map(|(d, n)| Exponent::rational(ratio(n, d)).unwrap())
}

pub fn silver(n: i64) -> QuadNum {
    qi_make(n, 1, 2, n * n + 4).unwrap()
}

/// The same generators for hand-rolled loops with a seeded rng.
pub fn random_quad_irr<R: Rng>(rng: &mut R) -> QuadNum {
    let b = if rng.gen_bool(0.5) { rng.gen_range(1..=6) } else { -rng.gen_range(1..=6) };
    let d = NONSQUARES[rng.gen_range(0..NONSQUARES.len())];
    qi_make(rng.gen_range(-30i64..=30), b, rng.gen_range(1i64..=12), d).unwrap()
}

pub fn random_gamma<R: Rng>(rng: &mut R) -> QuadNum {
    let d = rng.gen_range(3i64..=200);
    // 0 < n/d < 1/2
    let n = rng.gen_range(1..=(d - 1) / 2);
    QuadNum::from_ratio(n, d)
}

pub fn random_tau<R: Rng>(rng: &mut R) -> Exponent {
    let d = rng.gen_range(1i64..=8);
    let n = rng.gen_range(d..=3 * d);
    Exponent::rational(ratio(n, d)).unwrap()
}
