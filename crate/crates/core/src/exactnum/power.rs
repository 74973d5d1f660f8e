//! Powers `q^tau` and the exact-or-certified comparisons built on them.
//!
//! Three routes are tried in order:
//! 1. a cheap enclosure at the starting precision;
//! 2. an exact algebraic route: for `tau = r/s` compare `s`-th powers, and for
//!    `tau = log(alpha)/log(n)` with `q^v = n^u` use `q^tau = alpha^(u/v)`;
//! 3. enclosure refinement up to the precision ceiling.
//!
//! Ties (`Ordering::Equal`) can only come out of route 2.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::exponent::Exponent;
use super::interval::{enclose_quad, root_enclosure, Enclosure};
use super::quad::{qi_compare, QuadNum};
use super::rational::{self, Rational};
use crate::error::{Error, Result};

/// Precision schedule for enclosure refinement: start, then double up to `max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start: u32,
    pub max: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start: 64,
            max: 4096,
        }
    }
}

impl PrecisionPolicy {
    pub fn levels(&self) -> impl Iterator<Item = u32> {
        let max = self.max.max(self.start);
        std::iter::successors(Some(self.start), move |p| {
            let next = p.saturating_mul(2);
            (next <= max).then_some(next)
        })
    }
}

/// A real value that is either known exactly in a quadratic field or only
/// through a certified enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Real {
    Exact(QuadNum),
    Approx(Enclosure),
}

impl Real {
    pub fn exact(&self) -> Option<&QuadNum> {
        match self {
            Real::Exact(x) => Some(x),
            Real::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn enclose(&self, prec: u32) -> Enclosure {
        match self {
            Real::Exact(x) => enclose_quad(x, prec),
            Real::Approx(e) => e.clone(),
        }
    }

    fn combine(
        &self,
        other: &Real,
        prec: u32,
        exact: impl Fn(&QuadNum, &QuadNum) -> Result<QuadNum>,
        approx: impl Fn(&Enclosure, &Enclosure) -> Option<Enclosure>,
    ) -> Option<Real> {
        if let (Real::Exact(a), Real::Exact(b)) = (self, other) {
            if let Ok(v) = exact(a, b) {
                return Some(Real::Exact(v));
            }
        }
        approx(&self.enclose(prec), &other.enclose(prec)).map(Real::Approx)
    }

    pub fn add(&self, o: &Real, prec: u32) -> Real {
        self.combine(o, prec, |a, b| a.checked_add(b), |a, b| Some(a.add(b)))
            .expect("addition is total")
    }

    pub fn sub(&self, o: &Real, prec: u32) -> Real {
        self.combine(o, prec, |a, b| a.checked_sub(b), |a, b| Some(a.sub(b)))
            .expect("subtraction is total")
    }

    pub fn mul(&self, o: &Real, prec: u32) -> Real {
        self.combine(o, prec, |a, b| a.checked_mul(b), |a, b| Some(a.mul(b)))
            .expect("multiplication is total")
    }

    /// `None` when the divisor cannot be separated from zero.
    pub fn div(&self, o: &Real, prec: u32) -> Option<Real> {
        self.combine(o, prec, |a, b| a.checked_div(b), |a, b| a.div(b))
    }

    /// Decided order, or `None` when enclosures overlap and no exact route exists.
    pub fn compare(&self, o: &Real, prec: u32) -> Option<Ordering> {
        if let (Real::Exact(a), Real::Exact(b)) = (self, o) {
            return Some(qi_compare(a, b));
        }
        self.enclose(prec).compare(&o.enclose(prec))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(x) => x.to_f64(),
            Real::Approx(e) => e.midpoint().to_f64(),
        }
    }

    /// 20-significant-digit decimal, display only.
    pub fn display_decimal(&self) -> String {
        self.enclose(96).to_decimal(20)
    }

    /// Canonical text: the exact form, or `enc[lo,hi]` with dyadic endpoints.
    pub fn to_text(&self) -> String {
        match self {
            Real::Exact(x) => x.to_string(),
            Real::Approx(e) => format!("enc[{},{}]", e.lo(), e.hi()),
        }
    }
}

impl From<QuadNum> for Real {
    fn from(x: QuadNum) -> Self {
        Real::Exact(x)
    }
}

/// Largest `i` with `n = g^i`; returns `(g, i)`.
fn perfect_power(n: &BigInt) -> (BigInt, u32) {
    let bits = n.bits() as u32;
    for k in (2..=bits.max(2)).rev() {
        let r = n.nth_root(k);
        if r > BigInt::one() && num_traits::pow(r.clone(), k as usize) == *n {
            let (g, i) = perfect_power(&r);
            return (g, i * k);
        }
    }
    (n.clone(), 1)
}

/// `(u, v)` in lowest terms with `q^v = n^u`, when `log q / log n` is rational.
pub fn rational_log(q: &BigInt, n: &BigInt) -> Option<(u32, u32)> {
    if q.is_one() {
        return Some((0, 1));
    }
    if q < &BigInt::one() || n < &BigInt::from(2) {
        return None;
    }
    let (g, i) = perfect_power(n);
    let mut rest = q.clone();
    let mut j: u32 = 0;
    while rest.is_multiple_of(&g) {
        rest /= &g;
        j += 1;
    }
    if !rest.is_one() {
        return None;
    }
    let d = j.gcd(&i);
    Some((j / d, i / d))
}

fn int_pow(q: &BigInt, e: u64) -> BigInt {
    num_traits::pow(q.clone(), e as usize)
}

/// Exact `q^k` for an integer `k` (negative allowed).
fn int_power_rational(q: &BigInt, k: i64) -> Rational {
    let p = int_pow(q, k.unsigned_abs());
    if k >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// `q^(tau + offset)` without nesting: exact when it reduces, else an
/// enclosure at `prec` bits.
pub(crate) fn power_raw(q: &BigInt, tau: &Exponent, offset: i64, prec: u32) -> Real {
    assert!(q.is_positive(), "power base must be positive");
    if q.is_one() {
        return Real::Exact(QuadNum::one());
    }
    let shift = QuadNum::Rat(int_power_rational(q, offset));
    match tau {
        Exponent::Rat(t) => {
            let e = t + rational::int(offset);
            if e.is_integer() {
                let k = e.to_integer().to_i64().expect("exponent fits i64");
                return Real::Exact(QuadNum::Rat(int_power_rational(q, k)));
            }
            let r = e.numer().abs().to_u64().expect("exponent numerator fits u64");
            let s = e.denom().to_u32().expect("exponent denominator fits u32");
            let base = int_pow(q, r);
            let root = base.nth_root(s);
            let value = if int_pow(&root, s as u64) == base {
                Real::Exact(QuadNum::from_int(root))
            } else {
                Real::Approx(root_enclosure(&base, s, prec + 4))
            };
            if e.is_negative() {
                let one = Real::Exact(QuadNum::one());
                one.div(&value, prec).expect("positive power")
            } else {
                value
            }
        }
        Exponent::LogRatio { alpha, n } => {
            if let Some((u, 1)) = rational_log(q, n) {
                let a = QuadNum::Irr(alpha.clone()).pow(u);
                return Real::Exact(&a * &shift);
            }
            let w = prec + 16;
            let lq = Enclosure::from_int(q.clone(), w).ln().expect("q >= 2");
            let y = lq.mul(&tau.enclose(w));
            let p = y.exp();
            let shifted = p.mul(&enclose_quad(&shift, w));
            Real::Approx(shifted.with_precision(prec))
        }
    }
}

/// `power_enclosure`: certified `q^t`. Exact (zero width, symbolic) when `q`
/// is 1, when `t` is an integer, when a rational power has an integer root,
/// or when `t = log(alpha)/log(n)` and `q` is a power of `n`.
///
/// Enclosures are nested across precisions: the result at `2p` lies inside
/// the result at `p`.
pub fn power_enclosure(q: &BigInt, t: &Exponent, precision: u32) -> Real {
    power_offset_enclosure(q, t, 0, precision)
}

/// `q^(t + offset)` with the same nesting guarantee as [`power_enclosure`].
pub fn power_offset_enclosure(q: &BigInt, t: &Exponent, offset: i64, precision: u32) -> Real {
    let raw = power_raw(q, t, offset, precision);
    match raw {
        Real::Exact(_) => raw,
        Real::Approx(e) => {
            let half = precision / 2;
            if half >= 32 && precision.is_multiple_of(2) {
                match power_offset_enclosure(q, t, offset, half) {
                    Real::Approx(coarse) => Real::Approx(e.intersect(&coarse)),
                    exact => exact,
                }
            } else {
                Real::Approx(e)
            }
        }
    }
}

/// Sign of `y - g * q^(tau + offset)` for `g > 0`.
///
/// `None` means neither an exact route applies nor could enclosures up to
/// `policy.max` bits separate the two sides.
pub fn compare_to_power(
    y: &QuadNum,
    g: &QuadNum,
    q: &BigInt,
    tau: &Exponent,
    offset: i64,
    policy: &PrecisionPolicy,
) -> Option<Ordering> {
    debug_assert!(q.is_positive());
    match g.signum() {
        Ordering::Less => panic!("compare_to_power needs g > 0"),
        Ordering::Equal => return Some(y.signum()),
        Ordering::Greater => {}
    }
    if y.signum() != Ordering::Greater {
        return Some(Ordering::Less);
    }
    // Fold q^offset into y.
    let y = y * &QuadNum::Rat(int_power_rational(q, -offset));

    let by_enclosure = |prec: u32| -> Option<Ordering> {
        let rhs = enclose_quad(g, prec + 8).mul(&power_raw(q, tau, 0, prec + 8).enclose(prec + 8));
        enclose_quad(&y, prec + 8).compare(&rhs)
    };

    if let Some(o) = by_enclosure(policy.start) {
        return Some(o);
    }
    if let Some(o) = exact_route(&y, g, q, tau) {
        return Some(o);
    }
    policy.levels().skip(1).find_map(by_enclosure)
}

fn exact_route(y: &QuadNum, g: &QuadNum, q: &BigInt, tau: &Exponent) -> Option<Ordering> {
    match tau {
        Exponent::Rat(t) => {
            // y^s vs g^s q^r
            let r = t.numer().to_u64()?;
            let s = t.denom().to_u32()?;
            let lhs = y.pow(s);
            let rhs = &g.pow(s) * &QuadNum::from_int(int_pow(q, r));
            Some(qi_compare(&lhs, &rhs))
        }
        Exponent::LogRatio { alpha, n } => {
            // q^tau = alpha^(u/v): y^v vs g^v alpha^u
            let (u, v) = rational_log(q, n)?;
            let rhs = g
                .pow(v)
                .checked_mul(&QuadNum::Irr(alpha.clone()).pow(u))
                .ok()?;
            Some(qi_compare(&y.pow(v), &rhs))
        }
    }
}

/// `floor(c * q^tau)` for `c > 0`, decided by enclosures with an exact check
/// at integer boundaries.
pub fn floor_scaled_power(
    c: &QuadNum,
    q: &BigInt,
    tau: &Exponent,
    policy: &PrecisionPolicy,
) -> Result<BigInt> {
    for prec in policy.levels() {
        let v = enclose_quad(c, prec + 8).mul(&power_raw(q, tau, 0, prec + 8).enclose(prec + 8));
        let lo = v.lo().floor();
        let hi = v.hi().floor();
        if lo == hi {
            return Ok(lo);
        }
        if &hi - &lo == BigInt::one() {
            // Is the value >= hi?  hi - c q^tau <= 0.
            match compare_to_power(&QuadNum::from_int(hi.clone()), c, q, tau, 0, &PrecisionPolicy {
                start: prec,
                max: prec,
            }) {
                Some(Ordering::Less) | Some(Ordering::Equal) => return Ok(hi),
                Some(Ordering::Greater) => return Ok(lo),
                None => {}
            }
        }
    }
    Err(Error::PrecisionExhausted {
        bits: policy.max,
        context: "indeterminate floor".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::quad::qi_make;
    use crate::exactnum::rational::ratio;

    fn silver() -> QuadNum {
        qi_make(1, 1, 1, 2).unwrap()
    }

    #[test]
    fn exact_power_examples() {
        let tau = Exponent::log_ratio(silver(), 2).unwrap();
        assert_eq!(
            power_enclosure(&BigInt::from(2), &tau, 64),
            Real::Exact(silver())
        );
        assert_eq!(
            power_enclosure(&BigInt::from(8), &tau, 64),
            Real::Exact(silver().pow(3))
        );
        assert_eq!(
            power_enclosure(&BigInt::from(1), &tau, 64),
            Real::Exact(QuadNum::one())
        );
        let two = Exponent::integer(2).unwrap();
        assert_eq!(
            power_enclosure(&BigInt::from(5), &two, 64),
            Real::Exact(QuadNum::from_int(25))
        );
        let half = Exponent::rational(ratio(3, 2)).unwrap();
        assert_eq!(
            power_enclosure(&BigInt::from(4), &half, 64),
            Real::Exact(QuadNum::from_int(8))
        );
    }

    #[test]
    fn approximate_power_contains_truth() {
        let t = Exponent::rational(ratio(5, 3)).unwrap();
        let e = power_enclosure(&BigInt::from(7), &t, 64).enclose(64);
        let v = 7f64.powf(5.0 / 3.0);
        assert!(e.lo().to_f64() <= v * (1.0 + 1e-15) && v * (1.0 - 1e-15) <= e.hi().to_f64());
        let tau = Exponent::log_ratio(silver(), 2).unwrap();
        let e = power_enclosure(&BigInt::from(3), &tau, 128).enclose(128);
        let v = 3f64.powf(tau.to_f64());
        assert!((e.midpoint().to_f64() / v - 1.0).abs() < 1e-14);
        assert!(e.width().msb() < e.lo().msb() - 120);
    }

    #[test]
    fn nested_precisions() {
        let t = Exponent::rational(ratio(7, 5)).unwrap();
        let q = BigInt::from(11);
        let p = power_enclosure(&q, &t, 128).enclose(128);
        let p2 = power_enclosure(&q, &t, 256).enclose(256);
        assert!(p2.is_within(&p));
    }

    #[test]
    fn rational_logs() {
        assert_eq!(rational_log(&BigInt::from(8), &BigInt::from(4)), Some((3, 2)));
        assert_eq!(rational_log(&BigInt::from(2), &BigInt::from(4)), Some((1, 2)));
        assert_eq!(rational_log(&BigInt::from(1), &BigInt::from(7)), Some((0, 1)));
        assert_eq!(rational_log(&BigInt::from(6), &BigInt::from(2)), None);
        assert_eq!(rational_log(&BigInt::from(27), &BigInt::from(9)), Some((3, 2)));
    }

    #[test]
    fn ties_are_exact() {
        // 1 = (sqrt2 - 1) * 2^tau with 2^tau = 1 + sqrt2.
        let gamma = qi_make(-1, 1, 1, 2).unwrap();
        let tau = Exponent::log_ratio(silver(), 2).unwrap();
        let policy = PrecisionPolicy::default();
        assert_eq!(
            compare_to_power(&QuadNum::one(), &gamma, &BigInt::from(2), &tau, 0, &policy),
            Some(Ordering::Equal)
        );
        // 5^(3/2) vs sqrt(125): y = 11.18.. ; compare 11 < 5^(3/2)
        let t = Exponent::rational(ratio(3, 2)).unwrap();
        assert_eq!(
            compare_to_power(&QuadNum::from_int(11), &QuadNum::one(), &BigInt::from(5), &t, 0, &policy),
            Some(Ordering::Less)
        );
        // sqrt(125) = 5 sqrt 5 exactly.
        let y = qi_make(0, 5, 1, 5).unwrap();
        assert_eq!(
            compare_to_power(&y, &QuadNum::one(), &BigInt::from(5), &t, 0, &policy),
            Some(Ordering::Equal)
        );
    }

    #[test]
    fn floors() {
        let tau = Exponent::log_ratio(silver(), 2).unwrap();
        let policy = PrecisionPolicy::default();
        // 3 * 2^tau / gamma = 3 alpha^2 = 9 + 6 sqrt2 = 17.48...
        let gamma = qi_make(-1, 1, 1, 2).unwrap();
        let c = &QuadNum::from_int(3) / &gamma;
        assert_eq!(
            floor_scaled_power(&c, &BigInt::from(2), &tau, &policy).unwrap(),
            BigInt::from(17)
        );
        // exact integer boundary: 2 * 4^(1/2) = 4
        let half = Exponent::rational(ratio(1, 2)).unwrap();
        assert_eq!(
            floor_scaled_power(&QuadNum::from_int(2), &BigInt::from(4), &half, &policy).unwrap(),
            BigInt::from(4)
        );
    }
}
