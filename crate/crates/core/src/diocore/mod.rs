//! Diophantine sets `D(gamma, tau)`: parameters, the convergent criterion,
//! a brute-force oracle over `q <= Q`, and excluded intervals.

mod interval;
mod membership;
mod oracle;

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{Exponent, PrecisionPolicy, QuadNum};
use crate::par::Exec;

pub use interval::{excluded_interval, ExcludedInterval};
pub use membership::{
    is_member, is_member_cf, lemma_check, lemma_lhs, MembershipVerdict, Refutation, TailCertificate,
    UnknownReason,
};
pub use oracle::{brute_force_member, gap_sign, OracleOutcome, Point};

/// What kind of set the parameters describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParamClass {
    /// `gamma = 0`: every real number qualifies.
    Everything,
    /// `gamma >= 1/2`: the `q = 1` intervals already cover the line.
    Empty,
    Regular,
}

impl ParamClass {
    pub fn name(self) -> &'static str {
        match self {
            ParamClass::Everything => "everything",
            ParamClass::Empty => "empty",
            ParamClass::Regular => "regular",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiophParams {
    gamma: QuadNum,
    tau: Exponent,
}

impl DiophParams {
    /// Rejects `gamma < 0` and `tau < 1`. `gamma = 0` and `gamma >= 1/2` are
    /// accepted and classified.
    pub fn new(gamma: QuadNum, tau: Exponent) -> Result<Self> {
        if gamma.signum() == Ordering::Less {
            return Err(Error::InvalidInput(format!("gamma = {gamma} is negative")));
        }
        if tau.cmp_one() == Ordering::Less {
            return Err(Error::HypothesisViolation(format!(
                "{tau} is below 1; such sets are empty by Dirichlet's theorem"
            )));
        }
        Ok(DiophParams { gamma, tau })
    }

    pub fn gamma(&self) -> &QuadNum {
        &self.gamma
    }

    pub fn tau(&self) -> &Exponent {
        &self.tau
    }

    pub fn class(&self) -> ParamClass {
        if self.gamma.is_zero() {
            ParamClass::Everything
        } else if self.gamma >= QuadNum::from_ratio(1, 2) {
            ParamClass::Empty
        } else {
            ParamClass::Regular
        }
    }

    /// `1/gamma`, absent for `gamma = 0`.
    pub fn inv_gamma(&self) -> Option<QuadNum> {
        self.gamma.inv().ok()
    }

    pub fn tau_is_one(&self) -> bool {
        self.tau.cmp_one() == Ordering::Equal
    }

    /// Same `tau`, another `gamma`.
    pub fn with_gamma(&self, gamma: QuadNum) -> Result<Self> {
        DiophParams::new(gamma, self.tau.clone())
    }
}

impl fmt::Display for DiophParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gamma={} {}", self.gamma, self.tau)
    }
}

/// Knobs shared by the decision procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub policy: PrecisionPolicy,
    pub exec: Exec,
    /// Indices checked before giving up when `tau = 1`.
    pub tau_one_cutoff: usize,
    /// Hard cap on checked indices when `tau > 1`.
    pub max_k: usize,
    /// Bound on the period search of an expansion.
    pub expand_limit: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            policy: PrecisionPolicy::default(),
            exec: Exec::default(),
            tau_one_cutoff: 200,
            max_k: 100_000,
            expand_limit: 1 << 20,
        }
    }
}

impl Settings {
    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

/// `xi + k`; membership is unchanged by integer shifts.
pub fn translate(xi: &QuadNum, k: i64) -> QuadNum {
    xi + &QuadNum::from_int(k)
}

/// `true` when `gamma` lies in the open interval `(0, 1/2)`.
pub fn is_regular_gamma(gamma: &QuadNum) -> bool {
    gamma.is_positive() && *gamma < QuadNum::from_ratio(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{qi_make, rational::ratio};

    #[test]
    fn classification() {
        let t = Exponent::integer(2).unwrap();
        let p = |g: QuadNum| DiophParams::new(g, t.clone()).unwrap().class();
        assert_eq!(p(QuadNum::zero()), ParamClass::Everything);
        assert_eq!(p(QuadNum::from_ratio(1, 2)), ParamClass::Empty);
        assert_eq!(p(QuadNum::from_ratio(3, 5)), ParamClass::Empty);
        assert_eq!(p(QuadNum::from_ratio(1, 10)), ParamClass::Regular);
        assert_eq!(p(qi_make(-1, 1, 1, 2).unwrap()), ParamClass::Regular);
        assert!(DiophParams::new(QuadNum::from_ratio(-1, 10), t).is_err());
        let low = Exponent::rational(ratio(9, 10)).unwrap();
        assert!(matches!(
            DiophParams::new(QuadNum::from_ratio(1, 10), low),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn translation() {
        let s = qi_make(1, 1, 1, 2).unwrap();
        assert_eq!(translate(&s, -2), qi_make(-1, 1, 1, 2).unwrap());
        assert_eq!(translate(&s, 0), s);
    }
}
