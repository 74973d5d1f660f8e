//! Exact arithmetic in real quadratic fields.
//!
//! A [`QuadIrr`] is `(a + b*sqrt(d))/c` in canonical form: `d` square-free and
//! greater than one, `b != 0`, `c > 0` and `gcd(a, b, c) = 1`. Equal values
//! therefore have identical fields. Values that collapse to rationals are
//! carried by [`QuadNum::Rat`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{self, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// A rational or a quadratic irrational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QuadNum {
    Rat(Rational),
    Irr(QuadIrr),
}

/// Splits `d > 0` as `s^2 * r` with `r` square-free.
fn squarefree_split(d: &BigInt) -> Result<(BigInt, BigInt)> {
    let Some(mut rem) = d.to_u64() else {
        return squarefree_split_big(d);
    };
    let mut square: u64 = 1;
    let mut core: u64 = 1;
    let mut p: u64 = 2;
    while p.saturating_mul(p) <= rem {
        let mut e = 0;
        while rem % p == 0 {
            rem /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= p;
        }
        if e % 2 == 1 {
            core *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    core *= rem;
    Ok((BigInt::from(square), BigInt::from(core)))
}

/// Radicands past 64 bits: trial division by `p < 2^20`, after which the
/// remainder must be a perfect square or small enough to be prime. Products
/// like `q^2 * d` from continued-fraction recurrences always end up there.
fn squarefree_split_big(d: &BigInt) -> Result<(BigInt, BigInt)> {
    const LIMIT: u64 = 1 << 20;
    let mut rem = d.clone();
    let mut square = BigInt::one();
    let mut core = BigInt::one();
    let mut p: u64 = 2;
    while p < LIMIT && BigInt::from(p * p) <= rem {
        let bp = BigInt::from(p);
        let mut e = 0;
        loop {
            let (q, r) = rem.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rem = q;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= &bp;
        }
        if e % 2 == 1 {
            core *= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = rem.sqrt();
    if &root * &root == rem {
        square *= root;
    } else if p >= LIMIT && rem >= BigInt::from(LIMIT * LIMIT) {
        return Err(Error::UnsupportedField(format!(
            "cannot reduce radicand {d}: cofactor {rem} has no small factors"
        )));
    } else {
        core *= rem;
    }
    Ok((square, core))
}

/// Builds a canonical value from `(a + b*sqrt(d))/c` where `d`, when present,
/// is already square-free and greater than one.
fn build(a: BigInt, b: BigInt, c: BigInt, d: Option<&BigInt>) -> QuadNum {
    debug_assert!(!c.is_zero());
    let d = match d {
        Some(d) if !b.is_zero() => d,
        _ => return QuadNum::Rat(Rational::new(a, c)),
    };
    let g = a.gcd(&b).gcd(&c);
    let sign = if c.is_negative() { -BigInt::one() } else { BigInt::one() };
    let g = g * sign;
    QuadNum::Irr(QuadIrr {
        a: a / &g,
        b: b / &g,
        c: c / &g,
        d: d.clone(),
    })
}

/// `qi_make`: canonical value of `(a + b*sqrt(d))/c`.
pub fn qi_make(
    a: impl Into<BigInt>,
    b: impl Into<BigInt>,
    c: impl Into<BigInt>,
    d: impl Into<BigInt>,
) -> Result<QuadNum> {
    let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
    if c.is_zero() {
        return Err(Error::InvalidInput("zero denominator".into()));
    }
    if !d.is_positive() {
        return Err(Error::UnsupportedField(format!(
            "sqrt({d}) is not a real quadratic field"
        )));
    }
    if b.is_zero() {
        return Ok(QuadNum::Rat(Rational::new(a, c)));
    }
    let (s, r) = squarefree_split(&d)?;
    let b = b * s;
    if r.is_one() {
        return Ok(QuadNum::Rat(Rational::new(a + b, c)));
    }
    Ok(build(a, b, c, Some(&r)))
}

/// Sign of `a + b*sqrt(d)` for integers and non-square `d > 0`.
fn surd_sign(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign_cmp();
    let sb = b.sign_cmp();
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    let lhs = a * a;
    let rhs = b * b * d;
    if lhs > rhs {
        sa
    } else {
        sb
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// Sign of `a + b*sqrt(d1) + e*sqrt(d2)` with distinct square-free `d1, d2`.
/// Resolves with at most two squarings.
fn two_surd_sign(a: &BigInt, b: &BigInt, d1: &BigInt, e: &BigInt, d2: &BigInt) -> Ordering {
    let su = surd_sign(a, b, d1);
    let sv = e.sign_cmp();
    if sv == Ordering::Equal {
        return su;
    }
    if su == Ordering::Equal || su == sv {
        return sv;
    }
    // |u| vs |v| through u^2 - v^2 = (a^2 + b^2 d1 - e^2 d2) + 2ab sqrt(d1).
    let ra = a * a + b * b * d1 - e * e * d2;
    let rb = BigInt::from(2) * a * b;
    match surd_sign(&ra, &rb, d1) {
        Ordering::Greater => su,
        Ordering::Less => sv,
        Ordering::Equal => Ordering::Equal,
    }
}

impl QuadIrr {
    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn floor(&self) -> BigInt {
        let t = &self.b * &self.b * &self.d;
        let s = t.sqrt();
        let fl = if self.b.is_positive() { s } else { -s - 1 };
        (&self.a + fl).div_floor(&self.c)
    }

    /// Galois conjugate `(a - b*sqrt(d))/c`.
    pub fn conjugate(&self) -> QuadIrr {
        QuadIrr {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }
}

impl QuadNum {
    pub fn zero() -> Self {
        QuadNum::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        QuadNum::Rat(Rational::one())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        QuadNum::Rat(rational::int(n))
    }

    pub fn from_ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        QuadNum::Rat(rational::ratio(n, d))
    }

    /// `(a, b, c, d)` with `b = 0` and no radicand for rationals.
    pub fn parts(&self) -> (BigInt, BigInt, BigInt, Option<&BigInt>) {
        match self {
            QuadNum::Rat(r) => (r.numer().clone(), BigInt::zero(), r.denom().clone(), None),
            QuadNum::Irr(q) => (q.a.clone(), q.b.clone(), q.c.clone(), Some(&q.d)),
        }
    }

    /// Square-free radicand, `None` for rationals.
    pub fn field(&self) -> Option<&BigInt> {
        match self {
            QuadNum::Rat(_) => None,
            QuadNum::Irr(q) => Some(&q.d),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, QuadNum::Rat(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            QuadNum::Rat(r) => Some(r),
            QuadNum::Irr(_) => None,
        }
    }

    pub fn as_irr(&self) -> Option<&QuadIrr> {
        match self {
            QuadNum::Irr(q) => Some(q),
            QuadNum::Rat(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, QuadNum::Rat(r) if r.is_zero())
    }

    pub fn same_field(&self, other: &QuadNum) -> bool {
        match (self.field(), other.field()) {
            (Some(x), Some(y)) => x == y,
            _ => true,
        }
    }

    fn common_field<'a>(&'a self, other: &'a QuadNum) -> Result<Option<&'a BigInt>> {
        match (self.field(), other.field()) {
            (Some(x), Some(y)) if x != y => Err(Error::UnsupportedField(format!(
                "sqrt({x}) and sqrt({y}) do not share a quadratic field"
            ))),
            (Some(x), _) => Ok(Some(x)),
            (None, y) => Ok(y),
        }
    }

    pub fn checked_add(&self, other: &QuadNum) -> Result<QuadNum> {
        let d = self.common_field(other)?;
        let (a1, b1, c1, _) = self.parts();
        let (a2, b2, c2, _) = other.parts();
        Ok(build(
            &a1 * &c2 + &a2 * &c1,
            &b1 * &c2 + &b2 * &c1,
            c1 * c2,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &QuadNum) -> Result<QuadNum> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &QuadNum) -> Result<QuadNum> {
        let d = self.common_field(other)?;
        let (a1, b1, c1, _) = self.parts();
        let (a2, b2, c2, _) = other.parts();
        let dd = d.cloned().unwrap_or_else(BigInt::zero);
        Ok(build(
            &a1 * &a2 + &b1 * &b2 * &dd,
            &a1 * &b2 + &a2 * &b1,
            c1 * c2,
            d,
        ))
    }

    /// `qi_inv`.
    pub fn inv(&self) -> Result<QuadNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (a, b, c, d) = self.parts();
        let dd = d.cloned().unwrap_or_else(BigInt::zero);
        let norm = &a * &a - &b * &b * &dd;
        Ok(build(&c * &a, -(&c * &b), norm, d))
    }

    pub fn checked_div(&self, other: &QuadNum) -> Result<QuadNum> {
        self.common_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    /// `qi_sub_int`.
    pub fn sub_int(&self, m: impl Into<BigInt>) -> QuadNum {
        self - &QuadNum::from_int(m)
    }

    /// `qi_mobius`: `(a*x + b)/(c*x + d)`.
    pub fn mobius(
        &self,
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<QuadNum> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let num = &(self * &QuadNum::from_int(a)) + &QuadNum::from_int(b);
        let den = &(self * &QuadNum::from_int(c)) + &QuadNum::from_int(d);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        num.checked_div(&den)
    }

    pub fn pow(&self, e: u32) -> QuadNum {
        let mut base = self.clone();
        let mut acc = QuadNum::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn signum(&self) -> Ordering {
        match self {
            QuadNum::Rat(r) => r.numer().sign_cmp(),
            QuadNum::Irr(q) => surd_sign(&q.a, &q.b, &q.d),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> QuadNum {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn floor(&self) -> BigInt {
        match self {
            QuadNum::Rat(r) => rational::floor(r),
            QuadNum::Irr(q) => q.floor(),
        }
    }

    /// Nearest integer(s); two only for rational half-integers.
    pub fn nearest(&self) -> Vec<BigInt> {
        match self {
            QuadNum::Rat(r) => rational::nearest(r),
            QuadNum::Irr(_) => {
                let shifted = self + &QuadNum::from_ratio(1, 2);
                vec![shifted.floor()]
            }
        }
    }

    /// Low-accuracy float value, for display and sanity checks only.
    pub fn to_f64(&self) -> f64 {
        let (a, b, c, d) = self.parts();
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        match d {
            None => f(&a) / f(&c),
            Some(d) => (f(&a) + f(&b) * f(d).sqrt()) / f(&c),
        }
    }
}

/// `qi_compare`: exact order, across fields when needed.
pub fn qi_compare(x: &QuadNum, y: &QuadNum) -> Ordering {
    if x.same_field(y) {
        return (x - y).signum();
    }
    // (a1 + b1 r1)/c1 - (a2 + b2 r2)/c2, scaled by c1 c2 > 0.
    let (a1, b1, c1, d1) = x.parts();
    let (a2, b2, c2, d2) = y.parts();
    let (d1, d2) = (d1.expect("irrational"), d2.expect("irrational"));
    let a = &a1 * &c2 - &a2 * &c1;
    let b = &b1 * &c2;
    let e = -(&b2 * &c1);
    two_surd_sign(&a, &b, d1, &e, d2)
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        qi_compare(self, other)
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for QuadNum {
    fn from(r: Rational) -> Self {
        QuadNum::Rat(r)
    }
}

impl From<QuadIrr> for QuadNum {
    fn from(q: QuadIrr) -> Self {
        QuadNum::Irr(q)
    }
}

impl From<i64> for QuadNum {
    fn from(n: i64) -> Self {
        QuadNum::from_int(n)
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        match self {
            QuadNum::Rat(r) => QuadNum::Rat(-r),
            QuadNum::Irr(q) => QuadNum::Irr(QuadIrr {
                a: -&q.a,
                b: -&q.b,
                c: q.c.clone(),
                d: q.d.clone(),
            }),
        }
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

// Operator forms panic when the operands live in different quadratic fields;
// use the `checked_*` methods where that can happen.
macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &QuadNum) -> QuadNum {
                self.$checked(rhs).expect(concat!("QuadNum ", stringify!($m)))
            }
        }
        impl $tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                (&self).$checked(&rhs).expect(concat!("QuadNum ", stringify!($m)))
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(
            f,
            "({}{}{}*sqrt({}))/{}",
            self.a,
            sign,
            self.b.abs(),
            self.d,
            self.c
        )
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadNum::Rat(r) => f.write_str(&rational::format(r)),
            QuadNum::Irr(q) => q.fmt(f),
        }
    }
}
