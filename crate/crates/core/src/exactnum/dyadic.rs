//! Dyadic rationals `m * 2^e` with explicit directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// `mant * 2^exp`, kept with an odd mantissa (or zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// `floor(n / d)` or `ceil(n / d)` for `d > 0`.
fn div_dir(n: &BigInt, d: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => n.div_floor(d),
        Round::Up => -((-n).div_floor(d)),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Position of the leading bit: `2^(msb-1) <= |x| < 2^msb`.
    pub fn msb(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    /// Rounds to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let m = div_dir(&self.mant, &pow2(shift), dir);
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// Rounds to a multiple of `2^-frac` in direction `dir`.
    pub fn round_abs(&self, frac: i64, dir: Round) -> Dyadic {
        if self.exp >= -frac {
            return self.clone();
        }
        let shift = (-frac - self.exp) as u64;
        let m = div_dir(&self.mant, &pow2(shift), dir);
        Dyadic::new(m, -frac)
    }

    /// Integer multiple of `2^-frac` (exact when representable, else rounded).
    pub fn to_fixed(&self, frac: i64, dir: Round) -> BigInt {
        let shift = self.exp + frac;
        if shift >= 0 {
            &self.mant << shift as u64
        } else {
            div_dir(&self.mant, &pow2((-shift) as u64), dir)
        }
    }

    pub fn from_rational(x: &Rational, prec: u32, dir: Round) -> Dyadic {
        let (n, d) = (x.numer(), x.denom());
        if n.is_zero() {
            return Dyadic::zero();
        }
        if d.is_one() {
            return Dyadic::from_int(n.clone()).round(prec, dir);
        }
        if (d & (d - BigInt::one())).is_zero() {
            let k = d.bits() - 1;
            return Dyadic::new(n.clone(), -(k as i64)).round(prec, dir);
        }
        Dyadic::quotient(n, d, prec, dir)
    }

    /// `n / d` rounded to `prec` significant bits.
    pub fn quotient(n: &BigInt, d: &BigInt, prec: u32, dir: Round) -> Dyadic {
        assert!(!d.is_zero(), "dyadic quotient by zero");
        if n.is_zero() {
            return Dyadic::zero();
        }
        let (n, d) = if d.is_negative() { (-n, -d) } else { (n.clone(), d.clone()) };
        let k = prec as i64 + 2 + d.bits() as i64 - n.bits() as i64;
        let (num, den) = if k >= 0 {
            (&n << k as u64, d)
        } else {
            (n, &d << (-k) as u64)
        };
        Dyadic::new(div_dir(&num, &den, dir), -k).round(prec, dir)
    }

    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        let q = Dyadic::quotient(&self.mant, &other.mant, prec, dir);
        Dyadic::new(q.mant, q.exp + self.exp - other.exp)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn floor(&self) -> BigInt {
        self.to_fixed(0, Round::Down)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as u64)
        } else {
            Rational::new(self.mant.clone(), pow2((-self.exp) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = (&self.mant >> shift as u64).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + shift;
        m * 2f64.powi(e.clamp(-1100, 1100) as i32)
    }

    /// Decimal rendering with `digits` significant digits (truncated, display only).
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal_string(&self.to_rational(), digits)
    }
}

/// Decimal rendering of a rational with `digits` significant digits,
/// rounded to nearest.
pub fn decimal_string(x: &Rational, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let x = x.abs();
    let ten = BigInt::from(10);
    // Find e with 10^e <= x < 10^(e+1).
    let mut e: i64 = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    let ten_pow = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while x < ten_pow(e) {
        e -= 1;
    }
    while x >= ten_pow(e + 1) {
        e += 1;
    }
    let scale = ten_pow(digits as i64 - 1 - e);
    let scaled = &x * scale + Rational::new(BigInt::one(), BigInt::from(2));
    let mut m = scaled.numer().div_floor(scaled.denom()).to_string();
    if m.len() > digits {
        // Rounding carried into a new digit.
        m.truncate(digits);
        e += 1;
    }
    let body = if (-5..digits as i64).contains(&e) {
        if e >= 0 {
            let int_len = (e + 1) as usize;
            let (i, f) = m.split_at(int_len.min(m.len()));
            let f = f.trim_end_matches('0');
            if f.is_empty() {
                i.to_string()
            } else {
                format!("{i}.{f}")
            }
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            format!("0.{zeros}{}", m.trim_end_matches('0'))
        }
    } else {
        let (i, f) = m.split_at(1);
        let f = f.trim_end_matches('0');
        if f.is_empty() {
            format!("{i}e{e}")
        } else {
            format!("{i}.{f}e{e}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let s = self.signum().cmp(&other.signum());
        if s != Ordering::Equal {
            return s;
        }
        self.sub(other).signum().cmp(&0)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.mant)
        } else {
            write!(f, "{}*2^{}", self.mant, self.exp)
        }
    }
}
