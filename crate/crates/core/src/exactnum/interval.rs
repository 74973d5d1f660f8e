//! Certified real enclosures with dyadic endpoints.
//!
//! Every operation rounds its lower endpoint down and its upper endpoint up,
//! so `lo <= value <= hi` holds for whatever value the enclosure stands for.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::dyadic::{Dyadic, Round};
use super::quad::QuadNum;
use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Enclosure {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi: {lo} > {hi}");
        Enclosure { lo, hi, prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        Enclosure {
            lo: x.clone(),
            hi: x,
            prec,
        }
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        let x = Dyadic::from_int(n);
        Enclosure {
            lo: x.round(prec, Round::Down),
            hi: x.round(prec, Round::Up),
            prec,
        }
    }

    pub fn from_rational(x: &Rational, prec: u32) -> Self {
        Enclosure {
            lo: Dyadic::from_rational(x, prec, Round::Down),
            hi: Dyadic::from_rational(x, prec, Round::Up),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        &self.lo.to_rational() <= x && x <= &self.hi.to_rational()
    }

    /// `self` lies inside `other`.
    pub fn is_within(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Intersection of two enclosures of the same value.
    pub fn intersect(&self, other: &Enclosure) -> Enclosure {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        assert!(lo <= hi, "disjoint enclosures of one value");
        Enclosure {
            lo,
            hi,
            prec: self.prec.max(other.prec),
        }
    }

    /// Order when decidable: `Some` only if the enclosures are disjoint
    /// (or both are the same point).
    pub fn compare(&self, other: &Enclosure) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).shl(-1)
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u32) -> Enclosure {
        Enclosure {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        let prec = self.prec.min(o.prec);
        Enclosure::rounded(self.lo.add(&o.lo), self.hi.add(&o.hi), prec)
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        let prec = self.prec.min(o.prec);
        Enclosure::rounded(self.lo.sub(&o.hi), self.hi.sub(&o.lo), prec)
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        let prec = self.prec.min(o.prec);
        if self.lo.signum() >= 0 && o.lo.signum() >= 0 {
            return Enclosure::rounded(self.lo.mul(&o.lo), self.hi.mul(&o.hi), prec);
        }
        let p = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Enclosure::rounded(lo, hi, prec)
    }

    /// Division; `None` when the divisor encloses zero.
    pub fn div(&self, o: &Enclosure) -> Option<Enclosure> {
        if o.lo.signum() <= 0 && o.hi.signum() >= 0 {
            return None;
        }
        let prec = self.prec.min(o.prec);
        if self.lo.signum() >= 0 && o.lo.signum() > 0 {
            return Some(Enclosure {
                lo: self.lo.div(&o.hi, prec, Round::Down),
                hi: self.hi.div(&o.lo, prec, Round::Up),
                prec,
            });
        }
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| a.div(b, prec, Round::Down))
            .min()
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| a.div(b, prec, Round::Up))
            .max()
            .unwrap();
        Some(Enclosure { lo, hi, prec })
    }

    pub fn recip(&self) -> Option<Enclosure> {
        Enclosure::from_int(1, self.prec).div(self)
    }

    pub fn with_precision(&self, prec: u32) -> Enclosure {
        Enclosure::rounded(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn shl(&self, k: i64) -> Enclosure {
        Enclosure {
            lo: self.lo.shl(k),
            hi: self.hi.shl(k),
            prec: self.prec,
        }
    }

    /// Natural logarithm of a positive enclosure.
    pub fn ln(&self) -> Option<Enclosure> {
        if !self.is_positive() {
            return None;
        }
        let prec = self.prec;
        if self.is_point() {
            return Some(ln_point(&self.lo, prec));
        }
        let lo = ln_point(&self.lo, prec).lo;
        let hi = ln_point(&self.hi, prec).hi;
        Some(Enclosure { lo, hi, prec })
    }

    pub fn exp(&self) -> Enclosure {
        let prec = self.prec;
        if self.is_point() {
            return exp_point(&self.lo, prec);
        }
        // exp(lo + t) <= exp(lo) (1 + 2t) for 0 <= t <= 1
        let width = self.width();
        if width.msb() < -8 {
            let base = exp_point(&self.lo, prec);
            let factor = Dyadic::from_int(1).add(&width.shl(1));
            let hi = base.hi.mul(&factor).round(prec, Round::Up);
            return Enclosure {
                lo: base.lo,
                hi,
                prec,
            };
        }
        let lo = exp_point(&self.lo, prec).lo;
        let hi = exp_point(&self.hi, prec).hi;
        Enclosure { lo, hi, prec }
    }

    /// Decimal rendering of the midpoint (display only).
    pub fn to_decimal(&self, digits: usize) -> String {
        self.midpoint().to_decimal(digits)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Guard bits carried through series evaluations.
const GUARD: u32 = 32;

/// `atanh(z)` for a point `0 <= z <= 1/3`, as sum of `z^(2k+1)/(2k+1)` plus a
/// geometric tail bound.
fn atanh_small(z: &Enclosure, prec: u32) -> Enclosure {
    let w = prec + GUARD;
    let z = z.with_precision(w);
    let z2 = z.mul(&z);
    let mut power = z.clone();
    let mut sum = z.clone();
    let mut k: u64 = 1;
    // Stop once z^(2k+1) < 2^-(w+4).
    let eps = Dyadic::new(BigInt::one(), -(w as i64) - 4);
    loop {
        power = power.mul(&z2);
        let term = power
            .div(&Enclosure::from_int(2 * k + 1, w))
            .expect("positive divisor");
        sum = sum.add(&term);
        k += 1;
        if power.hi < eps {
            break;
        }
    }
    // Tail: sum_{j>=k} z^(2j+1)/(2j+1) <= z^(2k+1)/((2k+1)(1-z^2)) <= power*z2*(9/8).
    let tail_hi = power
        .mul(&z2)
        .mul(&Enclosure::from_rational(&Rational::new(9.into(), 8.into()), w))
        .hi;
    let tail = Enclosure {
        lo: Dyadic::zero(),
        hi: tail_hi,
        prec: w,
    };
    sum.add(&tail).with_precision(prec)
}

fn ln2_uncached(prec: u32) -> Enclosure {
    let w = prec + GUARD;
    let third = Enclosure::from_rational(&Rational::new(1.into(), 3.into()), w);
    atanh_small(&third, w).shl(1).with_precision(prec)
}

const LN2_CACHED_BITS: u32 = 2048;

fn ln2(prec: u32) -> Enclosure {
    static CACHE: OnceLock<Enclosure> = OnceLock::new();
    if prec > LN2_CACHED_BITS {
        return ln2_uncached(prec);
    }
    CACHE
        .get_or_init(|| ln2_uncached(LN2_CACHED_BITS))
        .with_precision(prec)
}

/// `ln(x)` for a positive dyadic point.
fn ln_point(x: &Dyadic, prec: u32) -> Enclosure {
    assert!(x.signum() > 0);
    let w = prec + GUARD;
    // x = m * 2^e with m in [1, 2).
    let e = x.msb() - 1;
    let m = x.shl(-e);
    if m == Dyadic::from_int(1) && e == 0 {
        return Enclosure::point(Dyadic::zero(), prec);
    }
    let one = Enclosure::from_int(1, w);
    let m = Enclosure::point(m, w);
    let z = m.sub(&one).div(&m.add(&one)).expect("m + 1 > 0");
    let ln_m = atanh_small(&z, w).shl(1);
    let ln_x = if e == 0 {
        ln_m
    } else {
        ln2(w + 16).mul(&Enclosure::from_int(e, w + 16)).add(&ln_m)
    };
    ln_x.with_precision(prec)
}

/// `exp(y)` for a dyadic point: Taylor series on `y / 2^s`, then `s` squarings.
fn exp_point(y: &Dyadic, prec: u32) -> Enclosure {
    if y.is_zero() {
        return Enclosure::point(Dyadic::from_int(1), prec);
    }
    // |y| / 2^s <= 2^-8
    let s = (y.msb() + 8).max(0);
    let w = prec + GUARD + s as u32;
    let r = Enclosure::point(y.shl(-s), w);
    let mut term = Enclosure::from_int(1, w);
    let mut sum = term.clone();
    let eps = Dyadic::new(BigInt::one(), -(w as i64) - 4);
    let mut k: u64 = 1;
    loop {
        term = term
            .mul(&r)
            .div(&Enclosure::from_int(k, w))
            .expect("positive divisor");
        sum = sum.add(&term);
        k += 1;
        if term.lo.abs().max(term.hi.abs()) < eps {
            break;
        }
    }
    // Remainder after the last term t_{k-1}: |R| <= 2 |t_{k-1}| |r| / k <= |t_{k-1}|.
    let bound = term.lo.abs().max(term.hi.abs());
    let rem = Enclosure {
        lo: bound.neg(),
        hi: bound,
        prec: w,
    };
    let mut v = sum.add(&rem);
    for _ in 0..s {
        v = v.mul(&v);
    }
    v.with_precision(prec)
}

/// Enclosure of an exact quadratic value with at least `prec` relative bits.
pub fn enclose_quad(x: &QuadNum, prec: u32) -> Enclosure {
    match x {
        QuadNum::Rat(r) => Enclosure::from_rational(r, prec),
        QuadNum::Irr(q) => {
            // (a + b sqrt d)/c with sqrt(b^2 d) bracketed by integer roots.
            let t = q.b() * q.b() * q.d();
            let mut frac = prec as u64 + 8;
            loop {
                let scaled = &t << (2 * frac);
                let s = scaled.sqrt();
                let (r_lo, r_hi) = (
                    Dyadic::new(s.clone(), -(frac as i64)),
                    Dyadic::new(s + 1, -(frac as i64)),
                );
                let (r_lo, r_hi) = if q.b().is_negative() {
                    (r_hi.neg(), r_lo.neg())
                } else {
                    (r_lo, r_hi)
                };
                let a = Dyadic::from_int(q.a().clone());
                let c = Dyadic::from_int(q.c().clone());
                let lo = a.add(&r_lo).div(&c, prec, Round::Down);
                let hi = a.add(&r_hi).div(&c, prec, Round::Up);
                let enc = Enclosure { lo, hi, prec };
                // Accept once the width is small relative to the magnitude.
                let mag = enc.lo.abs().min(enc.hi.abs());
                let ok = enc.lo.signum() == enc.hi.signum()
                    && enc.width().msb() + prec as i64 <= mag.msb() + 1;
                if ok || frac > 64 * prec as u64 {
                    return enc;
                }
                frac *= 2;
            }
        }
    }
}

/// Floor of `n^(1/k) * 2^frac`, with exactness flag.
pub(crate) fn scaled_root(n: &BigInt, k: u32, frac: u64) -> (BigInt, bool) {
    let scaled = n << (k as u64 * frac);
    let r = scaled.nth_root(k);
    let exact = num_traits::pow(r.clone(), k as usize) == scaled;
    (r, exact)
}

/// Enclosure of `n^(1/k)` for a positive integer `n`.
pub(crate) fn root_enclosure(n: &BigInt, k: u32, prec: u32) -> Enclosure {
    debug_assert!(n.is_positive() && k >= 1);
    let frac = prec as u64 + 2;
    let (r, exact) = scaled_root(n, k, frac);
    let lo = Dyadic::new(r.clone(), -(frac as i64));
    let hi = if exact {
        lo.clone()
    } else {
        Dyadic::new(r + 1, -(frac as i64))
    };
    Enclosure::rounded(lo, hi, prec)
}

impl Enclosure {
    pub fn is_nonneg(&self) -> bool {
        self.lo.signum() >= 0
    }

    pub fn zero(prec: u32) -> Enclosure {
        Enclosure::point(Dyadic::zero(), prec)
    }

    pub fn max_abs(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn is_zero_width(&self) -> bool {
        self.width().is_zero()
    }

    pub fn hull(&self, o: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.prec.min(o.prec),
        }
    }

    pub fn lo_rational(&self) -> Rational {
        self.lo.to_rational()
    }

    pub fn hi_rational(&self) -> Rational {
        self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::quad::qi_make;
    use crate::exactnum::rational::ratio;

    fn approx(e: &Enclosure) -> f64 {
        e.midpoint().to_f64()
    }

    #[test]
    fn ln_and_exp_bracket_known_values() {
        let l = ln2(100);
        assert!((approx(&l) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(l.width().msb() < -95);
        let ten = Enclosure::from_int(10, 80).ln().unwrap();
        assert!((approx(&ten) - 10f64.ln()).abs() < 1e-14);
        let e = Enclosure::from_int(1, 80).exp();
        assert!((approx(&e) - std::f64::consts::E).abs() < 1e-14);
        let big = Enclosure::from_int(37, 80).exp();
        assert!((approx(&big) / 37f64.exp() - 1.0).abs() < 1e-14);
        let neg = Enclosure::from_rational(&ratio(-7, 3), 80).exp();
        assert!((approx(&neg) - (-7f64 / 3.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn ln_exp_round_trip_contains_input() {
        let x = Enclosure::from_rational(&ratio(123, 7), 120);
        let back = x.ln().unwrap().exp();
        assert!(back.contains_rational(&ratio(123, 7)));
    }

    #[test]
    fn quad_enclosure_contains_value() {
        let s = qi_make(-1, 1, 1, 2).unwrap();
        let e = enclose_quad(&s, 64);
        let sq = e.mul(&e);
        // (sqrt2 - 1)^2 = 3 - 2 sqrt 2, check via 2 sqrt 2 = 3 - x^2
        let two_root2 = Enclosure::from_int(3, 64).sub(&sq);
        let eight = two_root2.mul(&two_root2);
        assert!(eight.contains_rational(&ratio(8, 1)));
        assert!(e.width().msb() <= -60);
        // tiny value from cancellation keeps relative precision
        let tiny = qi_make(-99_999_999i64, 70_710_678i64, 1, 2).unwrap();
        let t = enclose_quad(&tiny, 64);
        assert!(t.lo().signum() == t.hi().signum());
    }

    #[test]
    fn roots() {
        let r = root_enclosure(&BigInt::from(2), 2, 64);
        assert!(r.mul(&r).contains_rational(&ratio(2, 1)));
        let exact = root_enclosure(&BigInt::from(27), 3, 64);
        assert!(exact.is_point());
        assert_eq!(exact.lo(), &Dyadic::from_int(3));
    }
}
