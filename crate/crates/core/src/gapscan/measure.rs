//! Two-sided bounds for the Lebesgue measure of `D(gamma, tau) ∩ [0, 1]`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::cover::IntervalCover;
use crate::diocore::ParamClass;
use crate::exactnum::{power_offset_enclosure, QuadNum, Rational, Real};
use crate::report;

const TAIL_BITS: u32 = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureBounds {
    pub lower: Rational,
    pub upper: Rational,
    /// Upper bound for the intervals with `q > Q` meeting `[0, 1]`;
    /// `None` when the series diverges (`tau = 1`).
    pub tail: Option<Real>,
    pub diverges: bool,
}

impl MeasureBounds {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lower": report::rational(&self.lower),
            "upper": report::rational(&self.upper),
            "tail": self.tail.as_ref().map(report::real),
            "tail_diverges": self.diverges,
        })
    }
}

/// `2 gamma (Q^(1-tau)/(tau-1) + Q^(-tau)/tau)`, the integral bound for
/// `sum_{q>Q} (q+1) 2 gamma / q^(tau+1)`. Exact whenever `Q^tau` is.
pub fn tail_bound(gamma: &QuadNum, tau: &crate::exactnum::Exponent, q_max: u64) -> Option<Real> {
    if tau.cmp_one() != std::cmp::Ordering::Greater {
        return None;
    }
    let prec = TAIL_BITS;
    let q = BigInt::from(q_max);
    let t = match tau.as_rational() {
        Some(r) => Real::Exact(QuadNum::Rat(r.clone())),
        None => Real::Approx(tau.enclose(prec)),
    };
    let one = Real::Exact(QuadNum::one());
    let p0 = power_offset_enclosure(&q, tau, 0, prec);
    let p1 = power_offset_enclosure(&q, tau, -1, prec);
    let a = one.div(&p1.mul(&t.sub(&one, prec), prec), prec)?;
    let b = one.div(&p0.mul(&t, prec), prec)?;
    let two_gamma = Real::Exact(gamma * &QuadNum::from_int(2));
    Some(two_gamma.mul(&a.add(&b, prec), prec))
}

fn upper_rational(x: &Real) -> Rational {
    match x {
        Real::Exact(QuadNum::Rat(r)) => r.clone(),
        _ => x.enclose(TAIL_BITS).hi_rational(),
    }
}

/// `upper = 1 - |cover ∩ [0,1]|` and `lower = upper - tail`, with the cover
/// length taken from its inner and outer estimates respectively.
pub fn measure_bounds(cover: &IntervalCover) -> MeasureBounds {
    let params = cover.params();
    let one = Rational::one();
    match params.class() {
        ParamClass::Everything => {
            return MeasureBounds {
                lower: one.clone(),
                upper: one,
                tail: Some(Real::Exact(QuadNum::zero())),
                diverges: false,
            }
        }
        ParamClass::Empty => {
            return MeasureBounds {
                lower: Rational::zero(),
                upper: Rational::zero(),
                tail: tail_bound(params.gamma(), params.tau(), cover.q_max()),
                diverges: params.tau_is_one(),
            }
        }
        ParamClass::Regular => {}
    }
    let len = cover.covered_length();
    let upper = clamp01(&one - &len.lower);
    let tail = tail_bound(params.gamma(), params.tau(), cover.q_max());
    let lower = match &tail {
        Some(t) => clamp01(&one - &len.upper - upper_rational(t)),
        None => Rational::zero(),
    };
    MeasureBounds {
        lower,
        upper,
        diverges: tail.is_none(),
        tail,
    }
}

fn clamp01(x: Rational) -> Rational {
    if x.is_negative() {
        Rational::zero()
    } else if x > Rational::one() {
        Rational::one()
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diocore::{DiophParams, Settings};
    use crate::exactnum::{rational::ratio, Exponent};
    use crate::gapscan::build_cover;

    fn params(g: (i64, i64), tau: Exponent) -> DiophParams {
        DiophParams::new(QuadNum::from_ratio(g.0, g.1), tau).unwrap()
    }

    #[test]
    fn degenerate_classes() {
        let s = Settings::default();
        let t = Exponent::integer(2).unwrap();
        let c = build_cover(&DiophParams::new(QuadNum::zero(), t.clone()).unwrap(), 10, &s).unwrap();
        let m = measure_bounds(&c);
        assert_eq!((m.lower, m.upper), (Rational::one(), Rational::one()));
        let c = build_cover(&params((3, 5), t), 3, &s).unwrap();
        let m = measure_bounds(&c);
        assert_eq!((m.lower, m.upper), (Rational::zero(), Rational::zero()));
    }

    #[test]
    fn tau_two_closed_form() {
        let p = params((1, 10), Exponent::integer(2).unwrap());
        let c = build_cover(&p, 50, &Settings::default()).unwrap();
        let m = measure_bounds(&c);
        // 2/10 (1/50 + 1/(2 * 2500))
        let tail = ratio(1, 5) * (ratio(1, 50) + ratio(1, 5000));
        assert_eq!(m.tail, Some(Real::Exact(QuadNum::Rat(tail.clone()))));
        assert!(c.covered_length().exact.is_some());
        assert_eq!(m.width(), tail);
        assert!(m.lower < m.upper);
    }

    #[test]
    fn tau_one_diverges() {
        let p = params((1, 10), Exponent::integer(1).unwrap());
        let c = build_cover(&p, 5, &Settings::default()).unwrap();
        let m = measure_bounds(&c);
        assert!(m.diverges);
        assert_eq!(m.lower, Rational::zero());
        assert!(m.upper < Rational::one());
    }

    #[test]
    fn upper_decreases_with_q() {
        let p = params((1, 7), Exponent::rational(ratio(5, 3)).unwrap());
        let s = Settings::default();
        let mut last = Rational::one();
        for q in [1, 2, 5, 9, 20] {
            let m = measure_bounds(&build_cover(&p, q, &s).unwrap());
            assert!(m.upper <= last, "Q={q}");
            assert!(m.lower <= m.upper);
            last = m.upper;
        }
    }
}
