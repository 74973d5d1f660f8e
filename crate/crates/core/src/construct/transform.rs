//! The equivalent representative `alpha' = (m alpha + 1)/((2m + 1) alpha + 2)`
//! with `m = floor(3 * 2^tau / gamma)`, and a grid search for parameters that
//! isolate it.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde_json::{json, Value};

use crate::contfrac::{equivalent_by, expand, tails_agree};
use crate::diocore::{is_member, DiophParams, MembershipVerdict, ParamClass, Settings};
use crate::error::{Error, Result};
use crate::exactnum::{
    compare_to_power, enclose_quad, floor_scaled_power, power_offset_enclosure, rational, Enclosure,
    Exponent, QuadNum, Rational,
};
use crate::gapscan::{certify_isolated, IsolationCertificate};
use crate::par;
use crate::report;

/// Indices searched for a common tail of `alpha` and `alpha'`.
pub const TAIL_LIMIT: usize = 50;

#[derive(Clone, Debug)]
pub struct TransformInstance {
    pub alpha: QuadNum,
    pub params: DiophParams,
    pub membership: MembershipVerdict,
    /// Set when membership could not be confirmed.
    pub warning: Option<String>,
    pub m: BigInt,
    /// `(m, 1; 2m + 1, 2)`.
    pub matrix: [BigInt; 4],
    pub determinant: BigInt,
    pub alpha_prime: QuadNum,
    /// First `(i, j)` with `a'_i(alpha) = a'_j(alpha')`.
    pub tails_agree_at: Option<(usize, usize)>,
    pub search: Option<SearchHit>,
}

impl TransformInstance {
    pub fn to_json(&self) -> Value {
        json!({
            "alpha": report::quad(&self.alpha),
            "gamma": report::quad(self.params.gamma()),
            "tau": self.params.tau().to_string(),
            "membership": self.membership.to_json(),
            "warning": self.warning,
            "m": report::int(&self.m),
            "matrix": self.matrix.iter().map(report::int).collect::<Vec<_>>(),
            "determinant": report::int(&self.determinant),
            "alpha_prime": report::quad(&self.alpha_prime),
            "tails_agree_at": self.tails_agree_at.map(|(i, j)| json!({"alpha": i, "alpha_prime": j})),
            "search": self.search.as_ref().map(SearchHit::to_json),
        })
    }
}

/// Builds `alpha'` for `alpha` in `D(gamma, tau)`. A refuted membership is a
/// hypothesis violation; an undecided one only sets `warning`.
pub fn equivalent_transform(
    alpha: &QuadNum,
    gamma: &QuadNum,
    tau: &Exponent,
    settings: &Settings,
) -> Result<TransformInstance> {
    if alpha.is_rational() {
        return Err(Error::InvalidInput(format!("{alpha} is rational")));
    }
    let params = DiophParams::new(gamma.clone(), tau.clone())?;
    if !gamma.is_positive() {
        return Err(Error::InvalidInput("the transform needs gamma > 0".into()));
    }
    let membership = is_member(alpha, &params, settings)?;
    let warning = match &membership {
        MembershipVerdict::NotMember(_) => {
            return Err(Error::HypothesisViolation(format!(
                "{alpha} is not in D({gamma}, {tau}): {}",
                membership.to_record().replace('\n', " ")
            )))
        }
        MembershipVerdict::Member(_) => None,
        MembershipVerdict::Unknown { .. } => Some(format!(
            "membership undecided: {}",
            membership.to_record().replace('\n', " ")
        )),
    };
    let three_over_gamma = &QuadNum::from_int(3) * &gamma.inv()?;
    let m = floor_scaled_power(&three_over_gamma, &BigInt::from(2), tau, &settings.policy)?;
    let matrix = [m.clone(), BigInt::one(), &m * 2 + 1, BigInt::from(2)];
    let determinant = &matrix[0] * &matrix[3] - &matrix[1] * &matrix[2];
    let alpha_prime = equivalent_by(
        alpha,
        matrix[0].clone(),
        matrix[1].clone(),
        matrix[2].clone(),
        matrix[3].clone(),
    )?;
    let x = expand(alpha, settings.expand_limit)?;
    let y = expand(&alpha_prime, settings.expand_limit)?;
    let tails_agree_at = tails_agree(&x, &y, TAIL_LIMIT);
    Ok(TransformInstance {
        alpha: alpha.clone(),
        params,
        membership,
        warning,
        m,
        matrix,
        determinant,
        alpha_prime,
        tails_agree_at,
        search: None,
    })
}

/// Candidate `(gamma', tau')` pairs, tried in lexicographic order of
/// `(gamma index, tau index)`, and the cover cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchGrid {
    pub gammas: Vec<QuadNum>,
    pub taus: Vec<Exponent>,
    pub q_max: u64,
}

impl SearchGrid {
    /// `gamma' = k/64` for `1 <= k < 32` and `tau' = tau_min + j/16` for
    /// `1 <= j <= 32` (for a logarithmic `tau_min` the `j/16` steps start
    /// from `floor(16 tau_min)/16`), with `Q = 1000`.
    pub fn default_for(tau_min: &Exponent) -> Result<SearchGrid> {
        let base = match tau_min.as_rational() {
            Some(t) => t.clone(),
            None => {
                // an irrational tau_min never sits on the lattice, so the
                // floor settles at some precision
                let floor16 = |prec: u32| {
                    let e = tau_min.enclose(prec);
                    let f = |d: &crate::exactnum::Dyadic| rational::floor(&(d.to_rational() * rational::int(16)));
                    let (lo, hi) = (f(e.lo()), f(e.hi()));
                    (lo == hi).then_some(lo)
                };
                let f = [64, 256, 1024, 4096]
                    .into_iter()
                    .find_map(floor16)
                    .ok_or_else(|| Error::PrecisionExhausted {
                        bits: 4096,
                        context: "lattice point below tau_min".into(),
                    })?;
                Rational::new(f, 16.into())
            }
        };
        let taus = (1..=32)
            .map(|j| Exponent::rational(&base + rational::ratio(j, 16)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SearchGrid {
            gammas: (1..32).map(|k| QuadNum::from_ratio(k, 64)).collect(),
            taus,
            q_max: 1000,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchHit {
    pub gamma: QuadNum,
    pub tau: Exponent,
    pub certificate: IsolationCertificate,
}

impl SearchHit {
    pub fn to_json(&self) -> Value {
        json!({
            "gamma": report::quad(&self.gamma),
            "tau": self.tau.to_string(),
            "certificate": self.certificate.to_json(),
        })
    }
}

/// Convergent-like neighbours of `xi`: `(p, q, d)` with `d = |xi - p/q|`
/// small enough that `d q^2 <= gamma_max`, on the left and on the right.
struct Boundary {
    p: BigInt,
    q: BigInt,
    d: QuadNum,
}

fn boundaries(xi: &QuadNum, q_max: u64, gamma_max: &QuadNum, exec: par::Exec) -> (Vec<Boundary>, Vec<Boundary>) {
    let per_q = par::map_range(exec, 1, q_max, |q| {
        let qb = BigInt::from(q);
        let qq = QuadNum::from_int(q);
        let p = (xi * &qq).floor();
        let mut out = (None, None);
        for (side, p) in [(0, p.clone()), (1, p + 1)] {
            if p.gcd(&qb) != BigInt::one() && q > 1 {
                continue;
            }
            let c = QuadNum::Rat(Rational::new(p.clone(), qb.clone()));
            let d = (xi - &c).abs();
            // q^(tau'+1) >= q^2, so d q^2 > gamma_max rules out every grid point
            if &(&d * &qq) * &qq > *gamma_max {
                continue;
            }
            let b = Boundary { p, q: qb.clone(), d };
            if side == 0 {
                out.0 = Some(b);
            } else {
                out.1 = Some(b);
            }
        }
        out
    });
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (l, r) in per_q {
        left.extend(l);
        right.extend(r);
    }
    (left, right)
}

/// Grid indices `(i, j)` for which `d q^(tau_j + 1) = gamma_i` exactly.
fn hits(b: &Boundary, gammas: &[(usize, QuadNum, Enclosure)], taus: &[Exponent], settings: &Settings) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let prec = settings.policy.start;
    let d = enclose_quad(&b.d, prec + 8);
    for (j, t) in taus.iter().enumerate() {
        let v = d.mul(&power_offset_enclosure(&b.q, t, 1, prec + 8).enclose(prec + 8));
        for (i, g, ge) in gammas {
            if ge.hi() < v.lo() || ge.lo() > v.hi() {
                continue;
            }
            if compare_to_power(g, &b.d, &b.q, t, 1, &settings.policy) == Some(Ordering::Equal) {
                out.push((*i, j));
            }
        }
    }
    out
}

/// First grid point at which `xi` is certified isolated by two touching
/// intervals with denominators `<= q_max`. `None` says nothing about
/// parameters outside the grid.
pub fn search_isolation_params(
    xi: &QuadNum,
    tau_min: &Exponent,
    grid: &SearchGrid,
    settings: &Settings,
) -> Result<Option<SearchHit>> {
    if xi.is_rational() {
        return Ok(None);
    }
    // only gamma' in (0, 1/2) can have members; only tau' > tau_min counts
    let gammas: Vec<(usize, QuadNum, Enclosure)> = grid
        .gammas
        .iter()
        .enumerate()
        .filter(|(_, g)| crate::diocore::is_regular_gamma(g))
        .map(|(i, g)| (i, g.clone(), enclose_quad(g, 128)))
        .collect();
    let taus: Vec<Exponent> = grid.taus.clone();
    let tau_ok: Vec<bool> = taus.iter().map(|t| exponent_gt(t, tau_min)).collect();
    let Some(gamma_max) = gammas.iter().map(|(_, g, _)| g.clone()).max() else {
        return Ok(None);
    };
    let (left, right) = boundaries(xi, grid.q_max, &gamma_max, settings.exec);
    let left_hits = par::map_collect(settings.exec, &left, |b| hits(b, &gammas, &taus, settings));
    let right_hits = par::map_collect(settings.exec, &right, |b| hits(b, &gammas, &taus, settings));

    let first_at = |bs: &[Boundary], hs: &[Vec<(usize, usize)>], key: (usize, usize)| {
        bs.iter()
            .zip(hs)
            .find(|(_, h)| h.contains(&key))
            .map(|(b, _)| (b.p.clone(), b.q.clone()))
    };
    let mut keys: Vec<(usize, usize)> = left_hits.iter().flatten().copied().collect();
    keys.sort();
    keys.dedup();
    for key in keys {
        if !tau_ok[key.1] {
            continue;
        }
        let (Some(l), Some(r)) = (first_at(&left, &left_hits, key), first_at(&right, &right_hits, key)) else {
            continue;
        };
        let gamma = grid.gammas[key.0].clone();
        let tau = taus[key.1].clone();
        let params = DiophParams::new(gamma.clone(), tau.clone())?;
        if params.class() != ParamClass::Regular {
            continue;
        }
        if let Ok(certificate) = certify_isolated(xi, &params, l, r, settings) {
            return Ok(Some(SearchHit {
                gamma,
                tau,
                certificate,
            }));
        }
    }
    Ok(None)
}

/// `a > b` for exponents, exactly when both are rational.
fn exponent_gt(a: &Exponent, b: &Exponent) -> bool {
    if a == b {
        return false;
    }
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        return x > y;
    }
    let mut prec = 64;
    loop {
        if let Some(o) = a.enclose(prec).compare(&b.enclose(prec)) {
            return o == Ordering::Greater;
        }
        if prec >= 4096 {
            // distinct exponents that enclosures cannot separate: be conservative
            return false;
        }
        prec *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::silver_family;
    use crate::exactnum::qi_make;

    fn phi() -> QuadNum {
        qi_make(1, 1, 2, 5).unwrap()
    }

    #[test]
    fn golden_transform() {
        let s = Settings::default();
        let t = equivalent_transform(&phi(), &QuadNum::from_ratio(3, 10), &Exponent::integer(1).unwrap(), &s)
            .unwrap();
        assert_eq!(t.m, BigInt::from(20));
        assert_eq!(t.alpha_prime, phi().mobius(20, 1, 41, 2).unwrap());
        assert_eq!(t.determinant, BigInt::from(-1));
        assert!(t.warning.is_some());
        assert!(t.tails_agree_at.is_some());
    }

    #[test]
    fn silver_transform_uses_exact_floor() {
        let s = Settings::default();
        let i = silver_family(2, &s).unwrap();
        let t = equivalent_transform(&i.alpha, &i.gamma, &i.tau, &s).unwrap();
        assert_eq!(t.m, BigInt::from(17));
        assert!(t.warning.is_none());
    }

    #[test]
    fn refuted_membership_is_a_hypothesis_violation() {
        let s = Settings::default();
        let r = equivalent_transform(&phi(), &QuadNum::from_ratio(2, 5), &Exponent::integer(1).unwrap(), &s);
        assert!(matches!(r, Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn search_finds_the_family_parameters() {
        let s = Settings::default();
        let i = silver_family(2, &s).unwrap();
        let grid = SearchGrid {
            gammas: vec![QuadNum::from_ratio(1, 10), i.gamma.clone(), QuadNum::from_ratio(2, 5)],
            taus: vec![Exponent::rational(rational::ratio(3, 2)).unwrap(), i.tau.clone()],
            q_max: 100,
        };
        let hit = search_isolation_params(&i.alpha, &Exponent::integer(1).unwrap(), &grid, &s)
            .unwrap()
            .unwrap();
        assert_eq!((hit.gamma, hit.tau), (i.gamma, i.tau));
        assert_eq!(hit.certificate.left, (2.into(), 1.into()));
    }

    #[test]
    fn search_with_empty_gammas() {
        let s = Settings::default();
        let i = silver_family(2, &s).unwrap();
        let grid = SearchGrid {
            gammas: vec![QuadNum::from_ratio(1, 2), QuadNum::from_ratio(3, 4)],
            taus: vec![i.tau.clone()],
            q_max: 100,
        };
        assert_eq!(search_isolation_params(&i.alpha, &Exponent::integer(1).unwrap(), &grid, &s).unwrap(), None);
    }

    #[test]
    fn default_grid() {
        let g = SearchGrid::default_for(&Exponent::integer(1).unwrap()).unwrap();
        assert_eq!(g.gammas.len(), 31);
        assert_eq!(g.taus[0], Exponent::rational(rational::ratio(17, 16)).unwrap());
        let tau = silver_family(2, &Settings::default()).unwrap().tau;
        let g = SearchGrid::default_for(&tau).unwrap();
        // tau = 1.2715...; floor(16 tau) = 20
        assert_eq!(g.taus[0], Exponent::rational(rational::ratio(21, 16)).unwrap());
    }
}
