//! Regular continued fractions of rationals and quadratic irrationals.
//!
//! Expansions are stored as `a0`, a pre-period and a period (empty for
//! rationals). The period starts at index 1 or later; for `[n; n, n, ...]`
//! this gives `a0 = n`, no pre-period and period `[n]`.
//!
//! Text form: `[a0; a1, a2, (b1, b2)]` with the period in parentheses.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{qi_make, QuadNum, Rational};

pub struct CFExpansion {
    a0: BigInt,
    preperiod: Vec<BigInt>,
    period: Vec<BigInt>,
    source: QuadNum,
    // a'_k for k = 0 ..= preperiod.len() + period.len() (or up to the last
    // index for rationals).
    tails: Vec<QuadNum>,
    // rows k = -1, 0, 1, ... at index k + 1
    table: RwLock<Vec<(BigInt, BigInt)>>,
}

impl Clone for CFExpansion {
    fn clone(&self) -> Self {
        CFExpansion {
            a0: self.a0.clone(),
            preperiod: self.preperiod.clone(),
            period: self.period.clone(),
            source: self.source.clone(),
            tails: self.tails.clone(),
            table: RwLock::new(self.table.read().expect("table lock").clone()),
        }
    }
}

impl fmt::Debug for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CFExpansion({self} = {})", self.source)
    }
}

impl PartialEq for CFExpansion {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

impl Eq for CFExpansion {}

fn fresh_table() -> RwLock<Vec<(BigInt, BigInt)>> {
    RwLock::new(vec![(BigInt::one(), BigInt::zero())])
}

/// `(P + sqrt(D))/Q` with `Q | D - P^2`, the usual state for expanding a
/// quadratic irrational.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Surd {
    p: BigInt,
    q: BigInt,
}

impl Surd {
    fn floor(&self, s: &BigInt) -> BigInt {
        if self.q.is_positive() {
            (&self.p + s).div_floor(&self.q)
        } else {
            (&self.p + s + BigInt::one()).div_floor(&self.q)
        }
    }

    fn value(&self, d: &BigInt) -> QuadNum {
        qi_make(self.p.clone(), 1, self.q.clone(), d.clone()).expect("valid surd")
    }
}

/// Expands `x`. For quadratic irrationals the period is found by repetition
/// of a complete quotient; `k_max` bounds the search.
pub fn expand(x: &QuadNum, k_max: usize) -> Result<CFExpansion> {
    match x {
        QuadNum::Rat(r) => Ok(expand_rational(r)),
        QuadNum::Irr(_) => expand_irrational(x, k_max),
    }
}

fn expand_rational(r: &Rational) -> CFExpansion {
    let mut n = r.numer().clone();
    let mut d = r.denom().clone();
    let mut quotients = Vec::new();
    let mut tails = Vec::new();
    loop {
        tails.push(QuadNum::Rat(Rational::new(n.clone(), d.clone())));
        let (a, rem) = n.div_mod_floor(&d);
        quotients.push(a);
        if rem.is_zero() {
            break;
        }
        n = d;
        d = rem;
    }
    let a0 = quotients.remove(0);
    CFExpansion {
        a0,
        preperiod: quotients,
        period: Vec::new(),
        source: QuadNum::Rat(r.clone()),
        tails,
        table: fresh_table(),
    }
}

fn expand_irrational(x: &QuadNum, k_max: usize) -> Result<CFExpansion> {
    let (a, b, c, d) = x.parts();
    let d = d.expect("irrational").clone();
    // x = (a + b sqrt(d))/c = (P + sqrt(D))/Q
    let big_d = &b * &b * &d;
    let (mut p, mut q) = if b.is_positive() { (a, c) } else { (-a, -c) };
    if !(&big_d - &p * &p).is_multiple_of(&q) {
        let m = q.abs();
        p *= &m;
        q *= &m;
        let big_d = &big_d * &m * &m;
        return run_expansion(x, Surd { p, q }, big_d, k_max);
    }
    run_expansion(x, Surd { p, q }, big_d, k_max)
}

fn run_expansion(x: &QuadNum, start: Surd, big_d: BigInt, k_max: usize) -> Result<CFExpansion> {
    let s = big_d.sqrt();
    let mut seen: HashMap<Surd, usize> = HashMap::new();
    let mut quotients: Vec<BigInt> = Vec::new();
    let mut states = Vec::new();
    let mut cur = start;
    for k in 0..=k_max {
        if k >= 1 {
            if let Some(&i) = seen.get(&cur) {
                let period = quotients[i..k].to_vec();
                let pre = quotients[1..i].to_vec();
                let a0 = quotients[0].clone();
                let tails = states.iter().map(|st: &Surd| st.value(&big_d)).collect();
                return Ok(CFExpansion {
                    a0,
                    preperiod: pre,
                    period,
                    source: x.clone(),
                    tails,
                    table: fresh_table(),
                });
            }
            seen.insert(cur.clone(), k);
        }
        let ak = cur.floor(&s);
        let p_next = &ak * &cur.q - &cur.p;
        let q_next = (&big_d - &p_next * &p_next) / &cur.q;
        quotients.push(ak);
        states.push(cur);
        cur = Surd {
            p: p_next,
            q: q_next,
        };
    }
    Err(Error::PeriodNotFound { searched: k_max })
}

/// Convergents of a finite quotient list, as rows `k = -1, 0, ...`.
fn convergent_rows(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let mut rows = vec![(BigInt::one(), BigInt::zero())];
    let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    for a in quotients {
        let p = a * &p1 + &p2;
        let q = a * &q1 + &q2;
        p2 = std::mem::replace(&mut p1, p.clone());
        q2 = std::mem::replace(&mut q1, q.clone());
        rows.push((p, q));
    }
    rows
}

/// The value `[a0; pre..., (period)]`.
pub fn from_periodic(a0: impl Into<BigInt>, preperiod: &[BigInt], period: &[BigInt]) -> Result<QuadNum> {
    let a0 = a0.into();
    if period.is_empty() {
        return Err(Error::InvalidInput("empty period".into()));
    }
    if preperiod.iter().chain(period).any(|a| !a.is_positive()) {
        return Err(Error::InvalidInput(
            "partial quotients after a0 must be positive".into(),
        ));
    }
    // y = [(period)] solves Q_L y^2 + (Q_{L-1} - P_L) y - P_{L-1} = 0.
    let rows = convergent_rows(period);
    let l = rows.len() - 1;
    let (pl, ql) = &rows[l];
    let (pl1, ql1) = &rows[l - 1];
    let bq = ql1 - pl;
    let disc = &bq * &bq + BigInt::from(4) * ql * pl1;
    let y = qi_make(-bq, 1, BigInt::from(2) * ql, disc)?;
    let mut head = vec![a0];
    head.extend_from_slice(preperiod);
    let rows = convergent_rows(&head);
    let (pm, qm) = &rows[rows.len() - 1];
    let (pm1, qm1) = &rows[rows.len() - 2];
    y.mobius(pm.clone(), pm1.clone(), qm.clone(), qm1.clone())
}

/// Value of a finite expansion `[a0; rest...]`.
pub fn from_finite(a0: impl Into<BigInt>, rest: &[BigInt]) -> Result<Rational> {
    if rest.iter().any(|a| !a.is_positive()) {
        return Err(Error::InvalidInput(
            "partial quotients after a0 must be positive".into(),
        ));
    }
    let mut all = vec![a0.into()];
    all.extend_from_slice(rest);
    let (p, q) = convergent_rows(&all).pop().expect("non-empty");
    Ok(Rational::new(p, q))
}

impl CFExpansion {
    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    pub fn preperiod(&self) -> &[BigInt] {
        &self.preperiod
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    pub fn source(&self) -> &QuadNum {
        &self.source
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Index of the last quotient of a finite expansion.
    pub fn last_index(&self) -> Option<usize> {
        if self.is_periodic() {
            None
        } else {
            Some(self.preperiod.len())
        }
    }

    /// Largest partial quotient in the period (0 for rationals).
    pub fn period_max(&self) -> BigInt {
        self.period.iter().max().cloned().unwrap_or_default()
    }

    fn check_index(&self, k: usize) -> Result<()> {
        match self.last_index() {
            Some(last) if k > last => Err(Error::IndexOutOfRange {
                index: k,
                len: last + 1,
            }),
            _ => Ok(()),
        }
    }

    /// Position of index `k` inside the stored head + one period.
    fn wrap(&self, k: usize) -> usize {
        let start = 1 + self.preperiod.len();
        if self.period.is_empty() || k < start {
            k
        } else {
            start + (k - start) % self.period.len()
        }
    }

    /// Partial quotient `a_k`.
    pub fn quotient(&self, k: usize) -> Result<BigInt> {
        self.check_index(k)?;
        let i = self.wrap(k);
        Ok(if i == 0 {
            self.a0.clone()
        } else if i <= self.preperiod.len() {
            self.preperiod[i - 1].clone()
        } else {
            self.period[i - 1 - self.preperiod.len()].clone()
        })
    }

    /// Complete quotient `a'_k = [a_k; a_{k+1}, ...]`.
    pub fn complete_quotient(&self, k: usize) -> Result<QuadNum> {
        self.check_index(k)?;
        Ok(self.tails[self.wrap(k)].clone())
    }

    /// `(p_k, q_k)` for `k >= -1`, filling the cache as needed.
    pub fn convergents(&self, k: i64) -> Result<(BigInt, BigInt)> {
        if k < -1 {
            return Err(Error::InvalidInput(format!("convergent index {k} < -1")));
        }
        let idx = (k + 1) as usize;
        if let Some(row) = self.table.read().expect("table lock").get(idx) {
            return Ok(row.clone());
        }
        self.check_index(k as usize)?;
        let mut table = self.table.write().expect("table lock");
        while table.len() <= idx {
            let j = table.len() - 1; // next k
            let a = self.quotient(j)?;
            let (p1, q1) = table[j].clone();
            let (p2, q2) = if j == 0 {
                (BigInt::zero(), BigInt::one())
            } else {
                table[j - 1].clone()
            };
            table.push((&a * &p1 + p2, &a * &q1 + q2));
        }
        Ok(table[idx].clone())
    }

    /// `q_k` for `k >= -1`.
    pub fn q(&self, k: i64) -> Result<BigInt> {
        Ok(self.convergents(k)?.1)
    }

    /// `p_k / q_k`.
    pub fn convergent_value(&self, k: usize) -> Result<Rational> {
        let (p, q) = self.convergents(k as i64)?;
        Ok(Rational::new(p, q))
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.a0)?;
        if self.preperiod.is_empty() && self.period.is_empty() {
            return write!(f, "]");
        }
        write!(f, "; ")?;
        let mut parts: Vec<String> = self.preperiod.iter().map(|a| a.to_string()).collect();
        if !self.period.is_empty() {
            let body: Vec<String> = self.period.iter().map(|a| a.to_string()).collect();
            parts.push(format!("({})", body.join(", ")));
        }
        write!(f, "{}]", parts.join(", "))
    }
}

/// Parses `[a0; a1, ..., (b1, ...)]` and expands the value again, so the
/// result is canonical.
pub fn parse_cf(s: &str) -> Result<CFExpansion> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::parse(s, "expected [a0; ...]"))?;
    let int = |x: &str| -> Result<BigInt> {
        x.parse()
            .map_err(|_| Error::parse(s, format!("`{x}` is not an integer")))
    };
    let (head, rest) = match inner.split_once(';') {
        Some((h, r)) => (h, r),
        None => (inner, ""),
    };
    let a0 = int(head)?;
    let (pre_str, per_str) = match rest.find('(') {
        Some(i) => {
            let body = rest[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::parse(s, "period must close the expansion"))?;
            let pre = rest[..i].strip_suffix(',').unwrap_or(&rest[..i]);
            (pre, Some(body))
        }
        None => (rest, None),
    };
    let list = |x: &str| -> Result<Vec<BigInt>> {
        if x.is_empty() {
            return Ok(Vec::new());
        }
        x.split(',').map(int).collect()
    };
    let pre = list(pre_str)?;
    let value = match per_str {
        Some(body) => {
            let per = list(body)?;
            from_periodic(a0, &pre, &per).map_err(|e| Error::parse(s, e.to_string()))?
        }
        None => QuadNum::Rat(from_finite(a0, &pre).map_err(|e| Error::parse(s, e.to_string()))?),
    };
    expand(&value, 1 << 20)
}

/// `equivalent_by`: `(a x + b)/(c x + d)` for a unimodular matrix.
pub fn equivalent_by(
    x: &QuadNum,
    a: impl Into<BigInt>,
    b: impl Into<BigInt>,
    c: impl Into<BigInt>,
    d: impl Into<BigInt>,
) -> Result<QuadNum> {
    let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
    let det = &a * &d - &b * &c;
    if det.abs() != BigInt::one() {
        return Err(Error::InvalidInput(format!(
            "matrix ({a}, {b}; {c}, {d}) has determinant {det}, not +-1"
        )));
    }
    x.mobius(a, b, c, d)
}

/// Smallest `(i, j)` in lexicographic order of `max(i, j)` with
/// `a'_i(x) = a'_j(y)` and both indices at most `limit`.
pub fn tails_agree(x: &CFExpansion, y: &CFExpansion, limit: usize) -> Option<(usize, usize)> {
    for m in 0..=limit {
        for (i, j) in (0..=m).map(|i| (i, m)).chain((0..m).map(|j| (m, j))) {
            let (Ok(u), Ok(v)) = (x.complete_quotient(i), y.complete_quotient(j)) else {
                continue;
            };
            if u == v {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::ratio;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn silver() -> QuadNum {
        qi_make(1, 1, 1, 2).unwrap()
    }

    fn phi() -> QuadNum {
        qi_make(1, 1, 2, 5).unwrap()
    }

    #[test]
    fn expand_examples() {
        let cf = expand(&silver(), 100).unwrap();
        assert_eq!(cf.a0(), &BigInt::from(2));
        assert!(cf.preperiod().is_empty());
        assert_eq!(cf.period(), big(&[2]).as_slice());
        assert_eq!(cf.to_string(), "[2; (2)]");

        let cf = expand(&phi(), 100).unwrap();
        assert_eq!(cf.to_string(), "[1; (1)]");

        let cf = expand(&QuadNum::Rat(ratio(5, 2)), 100).unwrap();
        assert_eq!(cf.to_string(), "[2; 2]");
        assert_eq!(expand(&QuadNum::from_int(-3), 1).unwrap().to_string(), "[-3]");
        assert_eq!(
            expand(&QuadNum::Rat(ratio(-7, 3)), 1).unwrap().to_string(),
            "[-3; 1, 2]"
        );
    }

    #[test]
    fn convergent_examples() {
        let cf = expand(&silver(), 100).unwrap();
        assert_eq!(cf.convergents(-1).unwrap(), (1.into(), 0.into()));
        assert_eq!(cf.convergents(0).unwrap(), (2.into(), 1.into()));
        assert_eq!(cf.convergents(1).unwrap(), (5.into(), 2.into()));
        assert_eq!(cf.convergents(4).unwrap(), (70.into(), 29.into()));
        let qs: Vec<BigInt> = (0..5).map(|k| cf.q(k).unwrap()).collect();
        assert_eq!(qs, big(&[1, 2, 5, 12, 29]));
    }

    #[test]
    fn complete_quotient_examples() {
        let cf = expand(&silver(), 100).unwrap();
        for k in [0, 1, 7, 100] {
            assert_eq!(cf.complete_quotient(k).unwrap(), silver());
        }
        let cf = expand(&phi(), 100).unwrap();
        assert_eq!(cf.complete_quotient(3).unwrap(), phi());
        let cf = expand(&QuadNum::Rat(ratio(5, 2)), 100).unwrap();
        assert_eq!(cf.complete_quotient(1).unwrap(), QuadNum::from_int(2));
        assert!(matches!(
            cf.complete_quotient(2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
        assert!(cf.convergents(2).is_err());
    }

    #[test]
    fn from_periodic_examples() {
        let x = from_periodic(3, &[], &big(&[1, 1, 3])).unwrap();
        assert_eq!(x, qi_make(3, 1, 2, 17).unwrap());
        assert_eq!(expand(&x, 100).unwrap().to_string(), "[3; (1, 1, 3)]");
        assert_eq!(from_periodic(2, &[], &big(&[2])).unwrap(), silver());
        assert_eq!(from_periodic(1, &[], &big(&[1])).unwrap(), phi());
        assert!(from_periodic(1, &[], &[]).is_err());
        assert!(from_periodic(1, &big(&[0]), &big(&[1])).is_err());
    }

    #[test]
    fn sqrt_expansions() {
        let cf = expand(&qi_make(0, 1, 1, 7).unwrap(), 100).unwrap();
        assert_eq!(cf.to_string(), "[2; (1, 1, 1, 4)]");
        let cf = expand(&qi_make(0, 1, 1, 13).unwrap(), 100).unwrap();
        assert_eq!(cf.to_string(), "[3; (1, 1, 1, 1, 6)]");
        // non-reduced start with a denominator that needs rescaling
        let x = qi_make(1, -1, 3, 2).unwrap();
        let cf = expand(&x, 100).unwrap();
        let back = from_periodic(cf.a0().clone(), cf.preperiod(), cf.period()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn text_round_trip() {
        for s in ["[2; (2)]", "[3; (1, 1, 3)]", "[0; 5, 1, (2, 3)]", "[-1; 2, 3]", "[4]"] {
            assert_eq!(parse_cf(s).unwrap().to_string(), s);
        }
        assert_eq!(parse_cf("[2;(2)]").unwrap().to_string(), "[2; (2)]");
        // non-canonical input is canonicalized
        assert_eq!(parse_cf("[2; 2, (2)]").unwrap().to_string(), "[2; (2)]");
        assert_eq!(parse_cf("[2; 1, 1]").unwrap().to_string(), "[2; 2]");
        for bad in ["2; 3", "[a]", "[1; (0)]", "[1; (2), 3]"] {
            assert!(parse_cf(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn equivalence() {
        let p = phi();
        assert_eq!(equivalent_by(&p, 1, 1, 1, 0).unwrap(), p);
        assert_eq!(equivalent_by(&silver(), 1, 0, 0, 1).unwrap(), silver());
        assert!(equivalent_by(&p, 2, 0, 0, 1).is_err());
        let q = equivalent_by(&p, 15, 1, 31, 2).unwrap();
        let a = expand(&p, 100).unwrap();
        let b = expand(&q, 100).unwrap();
        assert!(tails_agree(&a, &b, 50).is_some());
        let s = expand(&silver(), 100).unwrap();
        assert!(tails_agree(&a, &s, 50).is_none());
    }

    #[test]
    fn concurrent_cache_reads() {
        let cf = expand(&qi_make(0, 1, 1, 31).unwrap(), 1000).unwrap();
        let expected: Vec<_> = (0..40).map(|k| cf.convergents(k).unwrap()).collect();
        let fresh = expand(&qi_make(0, 1, 1, 31).unwrap(), 1000).unwrap();
        std::thread::scope(|s| {
            for t in 0..4 {
                let fresh = &fresh;
                let expected = &expected;
                s.spawn(move || {
                    for k in (0..40).rev().skip(t) {
                        assert_eq!(&fresh.convergents(k).unwrap(), &expected[k as usize]);
                    }
                });
            }
        });
    }
}
