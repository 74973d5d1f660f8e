//! Union of the excluded intervals `I(p, q)`, `q <= Q`, over the band
//! `[-delta, 1 + delta]` with `delta = gamma`.
//!
//! Endpoints are sorted and swept on a 2^-100 fixed-point grid; whenever two
//! fixed-point ranges overlap the order is settled exactly (quadratic-field
//! comparison, or enclosure refinement when `q^tau` does not reduce). Two
//! intervals whose endpoints coincide exactly are kept apart and their common
//! endpoint is reported as a touching point.

use std::cmp::Ordering;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::diocore::{DiophParams, Settings};
use crate::error::{Error, Result};
use crate::exactnum::{
    enclose_quad, power_offset_enclosure, qi_compare, Dyadic, Enclosure, PrecisionPolicy,
    QuadNum, Rational, Real, Round,
};
use crate::par;

pub(crate) const FRAC: u32 = 100;
pub(crate) type Fixed = i128;
const ONE: Fixed = 1 << FRAC;
const RADIUS_BITS: u32 = 128;
/// Largest supported cutoff, so that `p * 2^100` fits an `i128`.
pub const MAX_Q: u64 = 1 << 22;

/// A reduced fraction `p/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frac {
    pub p: i64,
    pub q: u64,
}

impl Frac {
    pub fn value(&self) -> Rational {
        Rational::new(BigInt::from(self.p), BigInt::from(self.q))
    }

    fn center_fixed(&self) -> (Fixed, Fixed) {
        let n = (self.p as Fixed) << FRAC;
        let q = self.q as Fixed;
        (n.div_euclid(q), -((-n).div_euclid(q)))
    }
}

impl std::fmt::Display for Frac {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// One side of a merged interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    /// `p/q - r_q`.
    Left(Frac),
    /// `p/q + r_q`.
    Right(Frac),
    /// Cut at the edge of the band.
    Clip(QuadNum),
}

#[derive(Clone, Debug)]
pub(crate) struct RadiusRow {
    pub exact: Option<QuadNum>,
    pub lo: Fixed,
    pub hi: Fixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedInterval {
    pub left: Bound,
    pub right: Bound,
    /// Contributing fractions in sweep order.
    pub sources: Vec<Frac>,
    l: (Fixed, Fixed),
    r: (Fixed, Fixed),
}

/// Two interval closures meeting at one point, confirmed exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TouchingPoint {
    pub point: QuadNum,
    /// The interval ending at `point`.
    pub left: Frac,
    /// The interval starting at `point`.
    pub right: Frac,
}

impl TouchingPoint {
    pub fn in_unit_interval(&self) -> bool {
        self.point.signum() != Ordering::Less && self.point <= QuadNum::one()
    }
}

/// Endpoints that enclosures could not separate and no exact route decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearTouch {
    pub left: Frac,
    pub right: Frac,
    /// Enclosure of `left(right) - right(left)` at the last precision tried.
    pub gap: Enclosure,
}

/// Length of `cover ∩ [0, 1]`: rational bounds, and the exact value when
/// every endpoint is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveredLength {
    pub lower: Rational,
    pub upper: Rational,
    pub exact: Option<QuadNum>,
}

#[derive(Clone, Debug)]
pub struct IntervalCover {
    params: DiophParams,
    q_max: u64,
    band: (QuadNum, QuadNum),
    radii: Vec<RadiusRow>,
    policy: PrecisionPolicy,
    intervals: Vec<MergedInterval>,
    touching: Vec<TouchingPoint>,
    unconfirmed: Vec<NearTouch>,
    covered: CoveredLength,
    atoms: usize,
}

fn fixed_of(d: &Dyadic, dir: Round) -> Fixed {
    d.to_fixed(FRAC as i64, dir)
        .to_i128()
        .expect("fixed-point value out of range")
}

fn fixed_range(e: &Enclosure) -> (Fixed, Fixed) {
    (fixed_of(e.lo(), Round::Down), fixed_of(e.hi(), Round::Up))
}

fn to_rational(x: Fixed) -> Rational {
    Rational::new(BigInt::from(x), BigInt::from(ONE))
}

struct Atom {
    key: (Fixed, Fixed),
    frac: Frac,
}

impl IntervalCover {
    pub fn params(&self) -> &DiophParams {
        &self.params
    }

    pub fn q_max(&self) -> u64 {
        self.q_max
    }

    /// `(-delta, 1 + delta)`.
    pub fn band(&self) -> &(QuadNum, QuadNum) {
        &self.band
    }

    pub fn intervals(&self) -> &[MergedInterval] {
        &self.intervals
    }

    pub fn touching(&self) -> &[TouchingPoint] {
        &self.touching
    }

    pub fn unconfirmed(&self) -> &[NearTouch] {
        &self.unconfirmed
    }

    pub fn covered_length(&self) -> &CoveredLength {
        &self.covered
    }

    /// Number of reduced fractions that contributed an interval.
    pub fn atom_count(&self) -> usize {
        self.atoms
    }

    /// `r_q = gamma / q^(tau+1)` at `prec` bits (exact when it reduces).
    pub fn radius(&self, q: u64, prec: u32) -> Real {
        radius_real(&self.params, &self.radii, q, prec)
    }

    fn bound_fixed(&self, b: &Bound) -> (Fixed, Fixed) {
        bound_fixed(&self.radii, b)
    }

    /// Value of a bound at `prec` bits.
    pub fn bound_value(&self, b: &Bound, prec: u32) -> Real {
        bound_real(&self.params, &self.radii, b, prec)
    }

    fn cmp_bounds(&self, a: &Bound, b: &Bound) -> Option<Ordering> {
        cmp_bounds(&self.params, &self.radii, &self.policy, a, b)
    }

    /// Compares with a fixed edge whose fixed-point range is already known.
    fn cmp_edge(&self, a: &Bound, edge: &(Bound, (Fixed, Fixed))) -> Option<Ordering> {
        let (a0, a1) = self.bound_fixed(a);
        let (b0, b1) = edge.1;
        if a1 < b0 {
            Some(Ordering::Less)
        } else if a0 > b1 {
            Some(Ordering::Greater)
        } else {
            self.cmp_bounds(a, &edge.0)
        }
    }

    fn edge(&self, x: QuadNum) -> (Bound, (Fixed, Fixed)) {
        let b = Bound::Clip(x);
        let f = self.bound_fixed(&b);
        (b, f)
    }

    /// Whether `x` lies in the union; `None` when undecidable.
    pub fn covers(&self, x: &QuadNum) -> Option<bool> {
        let xb = Bound::Clip(x.clone());
        let (xl, xh) = self.bound_fixed(&xb);
        let mut undecided = false;
        for m in &self.intervals {
            if m.r.1 < xl || m.l.0 > xh {
                continue;
            }
            for f in &m.sources {
                let inside_left = self.cmp_bounds(&Bound::Left(*f), &xb);
                let inside_right = self.cmp_bounds(&xb, &Bound::Right(*f));
                match (inside_left, inside_right) {
                    (Some(Ordering::Less), Some(Ordering::Less)) => return Some(true),
                    (Some(_), Some(_)) => {}
                    _ => undecided = true,
                }
            }
        }
        if undecided {
            None
        } else {
            Some(false)
        }
    }

    /// CSV with columns `left,right,left_decimal,right_decimal,sources`;
    /// endpoints in exact text form (or `enc[lo,hi]`), sources as `p/q`
    /// separated by spaces.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidInput(format!("csv output failed: {e}"));
        out.write_record(["left", "right", "left_decimal", "right_decimal", "sources"])
            .map_err(io)?;
        for m in &self.intervals {
            let l = self.bound_value(&m.left, RADIUS_BITS);
            let r = self.bound_value(&m.right, RADIUS_BITS);
            let sources: Vec<String> = m.sources.iter().map(|f| f.to_string()).collect();
            out.write_record([
                l.to_text(),
                r.to_text(),
                l.display_decimal(),
                r.display_decimal(),
                sources.join(" "),
            ])
            .map_err(io)?;
        }
        out.flush()
            .map_err(|e| Error::InvalidInput(format!("csv output failed: {e}")))?;
        Ok(())
    }
}

fn radius_real(params: &DiophParams, radii: &[RadiusRow], q: u64, prec: u32) -> Real {
    if let Some(r) = radii.get(q as usize).and_then(|row| row.exact.clone()) {
        return Real::Exact(r);
    }
    let pow = power_offset_enclosure(&BigInt::from(q), params.tau(), 1, prec);
    Real::Exact(params.gamma().clone())
        .div(&pow, prec)
        .expect("q^(tau+1) > 0")
}

fn bound_fixed(radii: &[RadiusRow], b: &Bound) -> (Fixed, Fixed) {
    match b {
        Bound::Left(f) => {
            let (c0, c1) = f.center_fixed();
            let r = &radii[f.q as usize];
            (c0 - r.hi, c1 - r.lo)
        }
        Bound::Right(f) => {
            let (c0, c1) = f.center_fixed();
            let r = &radii[f.q as usize];
            (c0 + r.lo, c1 + r.hi)
        }
        Bound::Clip(x) => fixed_range(&enclose_quad(x, RADIUS_BITS)),
    }
}

fn bound_real(params: &DiophParams, radii: &[RadiusRow], b: &Bound, prec: u32) -> Real {
    match b {
        Bound::Left(f) => {
            Real::Exact(QuadNum::Rat(f.value())).sub(&radius_real(params, radii, f.q, prec), prec)
        }
        Bound::Right(f) => {
            Real::Exact(QuadNum::Rat(f.value())).add(&radius_real(params, radii, f.q, prec), prec)
        }
        Bound::Clip(x) => Real::Exact(x.clone()),
    }
}

fn cmp_bounds(
    params: &DiophParams,
    radii: &[RadiusRow],
    policy: &PrecisionPolicy,
    a: &Bound,
    b: &Bound,
) -> Option<Ordering> {
    let (a0, a1) = bound_fixed(radii, a);
    let (b0, b1) = bound_fixed(radii, b);
    if a1 < b0 {
        return Some(Ordering::Less);
    }
    if a0 > b1 {
        return Some(Ordering::Greater);
    }
    let (va, vb) = (
        bound_real(params, radii, a, policy.start),
        bound_real(params, radii, b, policy.start),
    );
    if let (Real::Exact(x), Real::Exact(y)) = (&va, &vb) {
        return Some(qi_compare(x, y));
    }
    policy
        .levels()
        .find_map(|prec| bound_real(params, radii, a, prec).compare(&bound_real(params, radii, b, prec), prec))
}

fn radius_row(params: &DiophParams, q: u64) -> RadiusRow {
    let r = radius_real(params, &[], q, RADIUS_BITS);
    let (lo, hi) = fixed_range(&r.enclose(RADIUS_BITS));
    RadiusRow {
        exact: r.exact().cloned(),
        lo: lo.max(0),
        hi,
    }
}

/// Builds the merged cover for `q <= q_max`.
pub fn build_cover(params: &DiophParams, q_max: u64, settings: &Settings) -> Result<IntervalCover> {
    if q_max < 1 {
        return Err(Error::InvalidInput("cover cutoff Q must be >= 1".into()));
    }
    if q_max > MAX_Q {
        return Err(Error::InvalidInput(format!("cover cutoff Q must be <= {MAX_Q}")));
    }
    let exec = settings.exec;
    let policy = settings.policy;
    let delta = params.gamma().clone();
    let band = (-&delta, &QuadNum::one() + &delta);

    let mut radii = vec![RadiusRow {
        exact: Some(QuadNum::zero()),
        lo: 0,
        hi: 0,
    }];
    radii.extend(par::map_range(exec, 1, q_max, |q| radius_row(params, q)));

    let band_lo = bound_fixed(&radii, &Bound::Clip(band.0.clone()));
    let band_hi = bound_fixed(&radii, &Bound::Clip(band.1.clone()));

    let per_q: Vec<Vec<Atom>> = par::map_range(exec, 1, q_max, |q| {
        let row = &radii[q as usize];
        if row.hi == 0 {
            return Vec::new();
        }
        let qf = q as Fixed;
        let p_min = (band_lo.0 - row.hi).div_euclid(ONE) * qf - 1;
        let p_max = (band_hi.1 + row.hi).div_euclid(ONE) * qf + qf + 1;
        let mut out = Vec::new();
        for p in p_min..=p_max {
            let p = p as i64;
            if (p as i128).gcd(&qf) != 1 {
                continue;
            }
            let frac = Frac { p, q };
            let l = bound_fixed(&radii, &Bound::Left(frac));
            let r = bound_fixed(&radii, &Bound::Right(frac));
            // keep anything whose outer range meets the band
            if r.1 <= band_lo.0 || l.0 >= band_hi.1 {
                continue;
            }
            out.push(Atom { key: l, frac });
        }
        out
    });
    let mut atoms: Vec<Atom> = per_q.into_iter().flatten().collect();
    let atom_count = atoms.len();

    par::sort_by(exec, &mut atoms, |a, b| {
        if a.key.1 < b.key.0 {
            return Ordering::Less;
        }
        if a.key.0 > b.key.1 {
            return Ordering::Greater;
        }
        match cmp_bounds(params, &radii, &policy, &Bound::Left(a.frac), &Bound::Left(b.frac)) {
            Some(o) if o != Ordering::Equal => o,
            _ => (a.frac.q, a.frac.p).cmp(&(b.frac.q, b.frac.p)),
        }
    });

    let mut intervals: Vec<MergedInterval> = Vec::new();
    let mut touching = Vec::new();
    let mut unconfirmed = Vec::new();
    let mut cur: Option<(MergedInterval, Frac)> = None;
    for atom in &atoms {
        let f = atom.frac;
        let fresh = || MergedInterval {
            left: Bound::Left(f),
            right: Bound::Right(f),
            sources: vec![f],
            l: atom.key,
            r: bound_fixed(&radii, &Bound::Right(f)),
        };
        let Some((m, right_frac)) = cur.as_mut() else {
            cur = Some((fresh(), f));
            continue;
        };
        let left = Bound::Left(f);
        match cmp_bounds(params, &radii, &policy, &left, &m.right) {
            Some(Ordering::Less) => {
                m.sources.push(f);
                let right = Bound::Right(f);
                let rf = bound_fixed(&radii, &right);
                match cmp_bounds(params, &radii, &policy, &right, &m.right) {
                    Some(Ordering::Greater) => {
                        m.right = right;
                        m.r = rf;
                        *right_frac = f;
                    }
                    Some(_) => {}
                    None => {
                        // keep the old bound but widen its fixed range
                        m.r = (m.r.0.max(rf.0), m.r.1.max(rf.1));
                    }
                }
            }
            order => {
                match order {
                    Some(Ordering::Equal) => {
                        let point = bound_real(params, &radii, &left, policy.start)
                            .exact()
                            .cloned()
                            .expect("equal bounds are exact");
                        touching.push(TouchingPoint {
                            point,
                            left: *right_frac,
                            right: f,
                        });
                    }
                    None => {
                        let prec = policy.max;
                        let gap = bound_real(params, &radii, &left, prec)
                            .sub(&bound_real(params, &radii, &m.right, prec), prec)
                            .enclose(prec);
                        unconfirmed.push(NearTouch {
                            left: *right_frac,
                            right: f,
                            gap,
                        });
                    }
                    _ => {}
                }
                let (done, _) = cur.replace((fresh(), f)).expect("current interval");
                intervals.push(done);
            }
        }
    }
    if let Some((m, _)) = cur {
        intervals.push(m);
    }

    let mut cover = IntervalCover {
        params: params.clone(),
        q_max,
        band,
        radii,
        policy,
        intervals,
        touching,
        unconfirmed,
        covered: CoveredLength {
            lower: Rational::zero(),
            upper: Rational::zero(),
            exact: None,
        },
        atoms: atom_count,
    };
    clip_to_band(&mut cover);
    cover.covered = covered_length(&cover);
    Ok(cover)
}

fn clip_to_band(cover: &mut IntervalCover) {
    let lo = cover.edge(cover.band.0.clone());
    let hi = cover.edge(cover.band.1.clone());
    let mut kept = Vec::with_capacity(cover.intervals.len());
    for mut m in std::mem::take(&mut cover.intervals) {
        // open intervals ending at or before the band are dropped; ones too
        // close to the edge to decide are kept unclipped
        let outside = cover
            .cmp_edge(&m.right, &lo)
            .is_some_and(|o| o != Ordering::Greater)
            || cover.cmp_edge(&m.left, &hi).is_some_and(|o| o != Ordering::Less);
        if outside {
            continue;
        }
        if cover.cmp_edge(&m.left, &lo) == Some(Ordering::Less) {
            m.l = lo.1;
            m.left = lo.0.clone();
        }
        if cover.cmp_edge(&m.right, &hi) == Some(Ordering::Greater) {
            m.r = hi.1;
            m.right = hi.0.clone();
        }
        kept.push(m);
    }
    cover.intervals = kept;
    let (b0, b1) = (cover.band.0.clone(), cover.band.1.clone());
    cover
        .touching
        .retain(|t| t.point > b0 && t.point < b1);
}

fn covered_length(cover: &IntervalCover) -> CoveredLength {
    let zero = cover.edge(QuadNum::zero());
    let one = cover.edge(QuadNum::one());
    let all_exact = cover.unconfirmed.is_empty() && cover.radii.iter().all(|r| r.exact.is_some());
    if all_exact {
        if let Some(v) = exact_covered_length(cover, &zero, &one) {
            let (lower, upper) = match &v {
                QuadNum::Rat(r) => (r.clone(), r.clone()),
                QuadNum::Irr(_) => {
                    let e = enclose_quad(&v, RADIUS_BITS);
                    (e.lo_rational(), e.hi_rational())
                }
            };
            return CoveredLength {
                lower,
                upper,
                exact: Some(v),
            };
        }
    }
    let mut inner: Fixed = 0;
    let mut outer: Fixed = 0;
    let mut prev_hi: Fixed = Fixed::MIN;
    for m in &cover.intervals {
        let lo_in = m.l.1.max(0).max(prev_hi);
        let hi_in = m.r.0.min(ONE);
        if hi_in > lo_in {
            inner += hi_in - lo_in;
        }
        let lo_out = m.l.0.max(0);
        let hi_out = m.r.1.min(ONE);
        if hi_out > lo_out {
            outer += hi_out - lo_out;
        }
        prev_hi = prev_hi.max(m.r.1);
    }
    CoveredLength {
        lower: to_rational(inner),
        upper: to_rational(outer.min(ONE)),
        exact: None,
    }
}

/// Exact `|cover ∩ [0,1]|` as `sum_q S_q/q + sum_q C_q r_q + const`.
fn exact_covered_length(
    cover: &IntervalCover,
    zero: &(Bound, (Fixed, Fixed)),
    one: &(Bound, (Fixed, Fixed)),
) -> Option<QuadNum> {
    let n = cover.radii.len();
    let mut s = vec![0 as Fixed; n];
    let mut c = vec![0u64; n];
    let mut constant = QuadNum::zero();
    for m in &cover.intervals {
        let right_le_zero = cover.cmp_edge(&m.right, zero)? != Ordering::Greater;
        let left_ge_one = cover.cmp_edge(&m.left, one)? != Ordering::Less;
        if right_le_zero || left_ge_one {
            continue;
        }
        if cover.cmp_edge(&m.left, zero)? == Ordering::Greater {
            match &m.left {
                Bound::Left(f) => {
                    s[f.q as usize] -= f.p as Fixed;
                    c[f.q as usize] += 1;
                }
                Bound::Right(_) => unreachable!("left side of an interval"),
                Bound::Clip(x) => constant = &constant - x,
            }
        }
        if cover.cmp_edge(&m.right, one)? == Ordering::Less {
            match &m.right {
                Bound::Right(f) => {
                    s[f.q as usize] += f.p as Fixed;
                    c[f.q as usize] += 1;
                }
                Bound::Left(_) => unreachable!("right side of an interval"),
                Bound::Clip(x) => constant = &constant + x,
            }
        } else {
            constant = &constant + &QuadNum::one();
        }
    }
    let mut centers = Rational::zero();
    let mut radial = QuadNum::zero();
    for q in 1..n {
        if s[q] != 0 {
            centers += Rational::new(BigInt::from(s[q]), BigInt::from(q));
        }
        if c[q] != 0 {
            let r = cover.radii[q].exact.clone()?;
            radial = radial.checked_add(&(&r * &QuadNum::from_int(c[q]))).ok()?;
        }
    }
    let total = constant.checked_add(&QuadNum::Rat(centers)).ok()?;
    total.checked_add(&radial).ok()
}
