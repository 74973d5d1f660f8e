//! Arbitrary-precision rationals.
//!
//! `num_rational::BigRational` already keeps fractions reduced with a positive
//! denominator, so it is used directly; this module only adds the helpers the
//! rest of the crate needs (floors, text form, integer powers).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Rational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// Nearest integers to `x`: one value, or both neighbours on an exact half.
pub fn nearest(x: &Rational) -> Vec<BigInt> {
    let two = BigInt::from(2);
    let doubled = x * int(2);
    if doubled.is_integer() && !(doubled.numer().is_even()) {
        let lo = floor(x);
        vec![lo.clone(), lo + 1]
    } else {
        let shifted = x + ratio(1, two);
        vec![floor(&shifted)]
    }
}

pub fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `0.6` or `-1.25`.
pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::parse(s, "empty rational"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::parse(n, "bad numerator"))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::parse(d, "bad denominator"))?;
        if d.is_zero() {
            return Err(Error::parse(s, "zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::parse(s, "bad decimal"));
        }
        let n: BigInt = digits.parse().map_err(|_| Error::parse(s, "bad decimal"))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Rational::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| Error::parse(s, "bad integer"))?;
    Ok(Rational::from_integer(n))
}

pub fn is_positive(x: &Rational) -> bool {
    x.is_positive()
}
