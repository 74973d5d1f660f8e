//! Excluded intervals `I(p, q) = { x : |x - p/q| < gamma / q^(tau+1) }`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use super::DiophParams;
use crate::error::{Error, Result};
use crate::exactnum::{
    compare_to_power, power_offset_enclosure, PrecisionPolicy, QuadNum, Rational, Real,
};
use crate::report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcludedInterval {
    pub p: BigInt,
    pub q: BigInt,
    pub center: Rational,
    /// `gamma / q^(tau+1)`.
    pub radius: Real,
}

/// The open interval around `p/q`.
pub fn excluded_interval(
    p: impl Into<BigInt>,
    q: impl Into<BigInt>,
    params: &DiophParams,
    prec: u32,
) -> Result<ExcludedInterval> {
    let (p, q) = (p.into(), q.into());
    if !q.is_positive() {
        return Err(Error::InvalidInput(format!("denominator {q} must be positive")));
    }
    let pow = power_offset_enclosure(&q, params.tau(), 1, prec);
    let radius = Real::Exact(params.gamma().clone())
        .div(&pow, prec)
        .expect("q^(tau+1) > 0");
    Ok(ExcludedInterval {
        center: Rational::new(p.clone(), q.clone()),
        p,
        q,
        radius,
    })
}

impl ExcludedInterval {
    fn center_real(&self) -> Real {
        Real::Exact(QuadNum::Rat(self.center.clone()))
    }

    pub fn left(&self, prec: u32) -> Real {
        self.center_real().sub(&self.radius, prec)
    }

    pub fn right(&self, prec: u32) -> Real {
        self.center_real().add(&self.radius, prec)
    }

    /// Whether `x` lies in the open interval; `None` if undecidable within
    /// the policy.
    pub fn contains(&self, x: &QuadNum, params: &DiophParams, policy: &PrecisionPolicy) -> Option<bool> {
        let d = (x - &QuadNum::Rat(self.center.clone())).abs();
        if d.is_zero() {
            return Some(params.gamma().is_positive());
        }
        // gamma - d q^(tau+1) > 0
        compare_to_power(params.gamma(), &d, &self.q, params.tau(), 1, policy)
            .map(|o| o == Ordering::Greater)
    }

    pub fn to_json(&self, prec: u32) -> Value {
        json!({
            "p": report::int(&self.p),
            "q": report::int(&self.q),
            "center": report::rational(&self.center),
            "radius": report::real(&self.radius),
            "left": report::real(&self.left(prec)),
            "right": report::real(&self.right(prec)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{qi_make, Exponent};

    fn silver() -> QuadNum {
        qi_make(1, 1, 1, 2).unwrap()
    }

    fn silver_params() -> DiophParams {
        let tau = Exponent::log_ratio(silver(), 2).unwrap();
        DiophParams::new(silver().inv().unwrap(), tau).unwrap()
    }

    #[test]
    fn integer_tau() {
        let p = DiophParams::new(QuadNum::from_ratio(2, 5), Exponent::integer(2).unwrap()).unwrap();
        let i = excluded_interval(0, 1, &p, 64).unwrap();
        assert_eq!(i.left(64), Real::Exact(QuadNum::from_ratio(-2, 5)));
        assert_eq!(i.right(64), Real::Exact(QuadNum::from_ratio(2, 5)));
        assert!(excluded_interval(0, 0, &p, 64).is_err());
    }

    #[test]
    fn silver_endpoints_meet_at_alpha() {
        let p = silver_params();
        let a = excluded_interval(2, 1, &p, 64).unwrap();
        assert_eq!(a.right(64), Real::Exact(silver()));
        let b = excluded_interval(5, 2, &p, 64).unwrap();
        assert_eq!(b.radius, Real::Exact(qi_make(3, -2, 2, 2).unwrap()));
        assert_eq!(b.left(64), Real::Exact(silver()));
        let policy = PrecisionPolicy::default();
        assert_eq!(a.contains(&silver(), &p, &policy), Some(false));
        assert_eq!(b.contains(&silver(), &p, &policy), Some(false));
        assert_eq!(a.contains(&QuadNum::from_int(2), &p, &policy), Some(true));
    }
}
