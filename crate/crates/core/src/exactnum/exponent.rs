use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::interval::{enclose_quad, Enclosure};
use super::quad::{QuadIrr, QuadNum};
use super::rational::{self, Rational};
use crate::error::{Error, Result};

/// The exponent `tau` in `q^tau`: an exact rational, or `log(alpha)/log(n)`
/// for a quadratic irrational `alpha > 1` and an integer `n >= 2`.
///
/// In the log-ratio form `n^tau = alpha` exactly, which is what lets powers of
/// `n` be reduced symbolically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Rat(Rational),
    LogRatio { alpha: QuadIrr, n: BigInt },
}

impl Exponent {
    pub fn rational(t: Rational) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::InvalidInput(format!(
                "exponent {} must be positive",
                rational::format(&t)
            )));
        }
        Ok(Exponent::Rat(t))
    }

    pub fn integer(t: i64) -> Result<Self> {
        Exponent::rational(rational::int(t))
    }

    pub fn log_ratio(alpha: QuadNum, n: impl Into<BigInt>) -> Result<Self> {
        let n = n.into();
        if n < BigInt::from(2) {
            return Err(Error::InvalidInput(format!("log base {n} must be >= 2")));
        }
        let alpha = match alpha {
            QuadNum::Irr(q) => q,
            QuadNum::Rat(r) => {
                return Err(Error::InvalidInput(format!(
                    "log-ratio argument {} must be a quadratic irrational",
                    rational::format(&r)
                )))
            }
        };
        if QuadNum::Irr(alpha.clone()) <= QuadNum::one() {
            return Err(Error::InvalidInput(format!(
                "log-ratio argument {alpha} must exceed 1"
            )));
        }
        Ok(Exponent::LogRatio { alpha, n })
    }

    /// Order of `tau` against 1 (for the log-ratio form: `alpha` against `n`).
    pub fn cmp_one(&self) -> Ordering {
        match self {
            Exponent::Rat(t) => t.cmp(&Rational::one()),
            Exponent::LogRatio { alpha, n } => {
                QuadNum::Irr(alpha.clone()).cmp(&QuadNum::from_int(n.clone()))
            }
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Exponent::Rat(t) => Some(t),
            Exponent::LogRatio { .. } => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Exponent::Rat(t) if t.is_integer())
    }

    /// Certified enclosure of the exponent itself.
    pub fn enclose(&self, prec: u32) -> Enclosure {
        match self {
            Exponent::Rat(t) => Enclosure::from_rational(t, prec),
            Exponent::LogRatio { .. } => {
                static CACHE: OnceLock<Mutex<HashMap<(Exponent, u32), Enclosure>>> =
                    OnceLock::new();
                let cache = CACHE.get_or_init(Default::default);
                let key = (self.clone(), prec);
                if let Some(e) = cache.lock().expect("cache lock").get(&key) {
                    return e.clone();
                }
                let e = self.enclose_uncached(prec);
                cache.lock().expect("cache lock").insert(key, e.clone());
                e
            }
        }
    }

    fn enclose_uncached(&self, prec: u32) -> Enclosure {
        match self {
            Exponent::Rat(t) => Enclosure::from_rational(t, prec),
            Exponent::LogRatio { alpha, n } => {
                let w = prec + 16;
                let la = enclose_quad(&QuadNum::Irr(alpha.clone()), w)
                    .ln()
                    .expect("alpha > 1");
                let ln = Enclosure::from_int(n.clone(), w).ln().expect("n >= 2");
                la.div(&ln).expect("ln n > 0").with_precision(prec)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Rat(t) => {
                t.numer().to_f64().unwrap_or(f64::NAN) / t.denom().to_f64().unwrap_or(f64::NAN)
            }
            Exponent::LogRatio { alpha, n } => {
                QuadNum::Irr(alpha.clone()).to_f64().ln() / n.to_f64().unwrap_or(f64::NAN).ln()
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Exponent::Rat(t) => t.is_positive(),
            Exponent::LogRatio { .. } => true,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rat(t) => write!(f, "t={}", rational::format(t)),
            Exponent::LogRatio { alpha, n } => write!(f, "t=log({alpha})/log({n})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::quad::qi_make;
    use crate::exactnum::rational::ratio;

    #[test]
    fn log_ratio_exceeds_one_when_alpha_exceeds_n() {
        let silver = qi_make(1, 1, 1, 2).unwrap();
        let t = Exponent::log_ratio(silver, 2).unwrap();
        assert_eq!(t.cmp_one(), Ordering::Greater);
        let e = t.enclose(64);
        let v = (1.0 + 2f64.sqrt()).ln() / 2f64.ln();
        assert!((e.midpoint().to_f64() - v).abs() < 1e-15);
        assert!(e.lo().to_f64() <= v + 1e-15 && v - 1e-15 <= e.hi().to_f64());
    }

    #[test]
    fn rejects_bad_forms() {
        assert!(Exponent::rational(ratio(-1, 2)).is_err());
        assert!(Exponent::log_ratio(QuadNum::from_int(3), 2).is_err());
        assert!(Exponent::log_ratio(qi_make(1, 1, 1, 2).unwrap(), 1).is_err());
        assert!(Exponent::log_ratio(qi_make(-1, 1, 1, 2).unwrap(), 2).is_err());
    }
}
