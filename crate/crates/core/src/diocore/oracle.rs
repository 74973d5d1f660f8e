//! The definition itself as an oracle: for each `q <= Q` test the nearest
//! `p` (both neighbours at a half-integer) for `|q x - p| < gamma / q^tau`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use super::{DiophParams, ParamClass, Settings};
use crate::error::{Error, Result};
use crate::exactnum::{
    compare_to_power, enclose_quad, power_enclosure, Dyadic, Enclosure, PrecisionPolicy, QuadNum,
    Real,
};
use crate::par;
use crate::report;

/// A test point: exact, or known only through an enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Exact(QuadNum),
    Approx(Enclosure),
}

impl From<QuadNum> for Point {
    fn from(x: QuadNum) -> Self {
        Point::Exact(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    /// `|q x - p| < gamma / q^tau`, with `distance = |q x - p|`.
    Excluded { p: BigInt, q: u64, distance: Real },
    /// No `q <= q_max` excludes the point.
    Consistent { q_max: u64 },
    /// The enclosure was too wide to decide at `q` (smaller `q` all passed).
    Undecided { q: u64 },
}

impl OracleOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            OracleOutcome::Excluded { .. } => "excluded",
            OracleOutcome::Consistent { .. } => "consistent",
            OracleOutcome::Undecided { .. } => "undecided",
        }
    }

    pub fn is_excluded(&self) -> bool {
        matches!(self, OracleOutcome::Excluded { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            OracleOutcome::Excluded { p, q, distance } => json!({
                "kind": self.kind(),
                "p": report::int(p),
                "q": q,
                "distance": report::real(distance),
            }),
            OracleOutcome::Consistent { q_max } => json!({ "kind": self.kind(), "q_max": q_max }),
            OracleOutcome::Undecided { q } => json!({ "kind": self.kind(), "q": q }),
        }
    }
}

/// Sign of `gamma - d q^tau`: `Greater` means `d < gamma / q^tau`.
pub fn gap_sign(d: &QuadNum, q: &BigInt, params: &DiophParams, policy: &PrecisionPolicy) -> Option<Ordering> {
    if d.is_zero() {
        return Some(params.gamma().signum());
    }
    compare_to_power(params.gamma(), d, q, params.tau(), 0, policy)
}

enum Step {
    Pass,
    Excluded(BigInt, Real),
    Undecided,
}

fn check_exact(x: &QuadNum, q: u64, params: &DiophParams, policy: &PrecisionPolicy) -> Step {
    let qb = BigInt::from(q);
    let qx = x * &QuadNum::from_int(qb.clone());
    let mut undecided = false;
    let gamma = params.gamma();
    for p in qx.nearest() {
        let d = qx.sub_int(p.clone()).abs();
        // tau >= 1 gives gamma / q^tau <= gamma / q, so d q >= gamma passes.
        if !d.is_zero() && &d * &QuadNum::from_int(qb.clone()) >= *gamma {
            continue;
        }
        match gap_sign(&d, &qb, params, policy) {
            Some(Ordering::Greater) => return Step::Excluded(p, Real::Exact(d)),
            Some(_) => {}
            None => undecided = true,
        }
    }
    if undecided {
        Step::Undecided
    } else {
        Step::Pass
    }
}

fn check_approx(x: &Enclosure, q: u64, params: &DiophParams, prec: u32) -> Step {
    let qx = Enclosure::from_int(q, prec).mul(x);
    let half = Dyadic::new(BigInt::one(), -1);
    let lo = qx.lo().add(&half).floor();
    let hi = qx.hi().add(&half).floor();
    let qb = BigInt::from(q);
    let bound = enclose_quad(params.gamma(), prec)
        .div(&power_enclosure(&qb, params.tau(), prec).enclose(prec))
        .expect("q^tau > 0");
    let mut undecided = false;
    let mut p = lo;
    while p <= hi {
        let d = qx.sub(&Enclosure::from_int(p.clone(), prec));
        let d = if d.lo().signum() < 0 && d.hi().signum() <= 0 {
            d.neg()
        } else if d.lo().signum() < 0 {
            Enclosure::new(Dyadic::zero(), d.max_abs(), prec)
        } else {
            d
        };
        if d.hi() < bound.lo() {
            return Step::Excluded(p, Real::Approx(d));
        }
        if d.lo() < bound.hi() {
            undecided = true;
        }
        p += 1;
    }
    if undecided {
        Step::Undecided
    } else {
        Step::Pass
    }
}

/// Checks every `q` in `1..=q_max`. The reported `q` is always the smallest
/// one that excludes the point (or could not be decided), whatever the
/// execution mode.
pub fn brute_force_member(
    xi: &Point,
    params: &DiophParams,
    q_max: u64,
    settings: &Settings,
) -> Result<OracleOutcome> {
    if q_max < 1 {
        return Err(Error::InvalidInput("oracle cutoff Q must be >= 1".into()));
    }
    if params.class() == ParamClass::Everything {
        return Ok(OracleOutcome::Consistent { q_max });
    }
    let policy = settings.policy;
    let step = |q: u64| -> Option<OracleOutcome> {
        let s = match xi {
            Point::Exact(x) => check_exact(x, q, params, &policy),
            Point::Approx(e) => check_approx(e, q, params, e.precision().max(policy.start)),
        };
        match s {
            Step::Pass => None,
            Step::Excluded(p, distance) => Some(OracleOutcome::Excluded { p, q, distance }),
            Step::Undecided => Some(OracleOutcome::Undecided { q }),
        }
    };
    Ok(par::find_first_range(settings.exec, 1, q_max, step)
        .unwrap_or(OracleOutcome::Consistent { q_max }))
}
