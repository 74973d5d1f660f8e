//! Membership via convergents: `x` is in `D(gamma, tau)` iff for every
//! `k >= 0`
//!
//! ```text
//! q_{k+1} / q_k^tau + 1 / (a'_{k+2} q_k^(tau-1)) <= 1/gamma.
//! ```
//!
//! For `tau > 1` the infinitely many checks reduce to finitely many: once
//! `a_{k+1} <= A` (the largest period quotient) the left side is at most
//! `(A + 2) / q_k^(tau-1)`, which drops below `1/gamma` as soon as
//! `q_K^(tau-1) >= gamma (A + 2)`, and `q_k` only grows after that.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use super::{DiophParams, ParamClass, Settings};
use crate::contfrac::{expand, CFExpansion};
use crate::error::Result;
use crate::exactnum::{compare_to_power, power_enclosure, PrecisionPolicy, QuadNum, Real};
use crate::report;

/// Finite evidence that the criterion holds for every `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailCertificate {
    /// Every `k < k_tail` was checked directly.
    pub k_tail: usize,
    /// Largest period quotient.
    pub a_max: BigInt,
    /// `q_{k_tail}`, which satisfies `q^(tau-1) >= gamma (a_max + 2)`.
    pub q_tail: BigInt,
    /// Indices where the criterion holds with equality.
    pub ties: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// The criterion fails at `k`; `lhs` encloses (or is) its left side.
    Lemma { k: usize, lhs: Real },
    /// A rational point `p/q` sits at distance 0 from itself.
    Rational { p: BigInt, q: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    /// `tau = 1` has no tail bound; every checked index passed, so the point
    /// is a bounded-type candidate.
    TauOne { bounded_type_candidate: bool },
    /// Enclosures up to `bits` could not order the two sides at `k` and no
    /// exact route applied.
    Precision { k: usize, bits: u32 },
    /// `max_k` indices checked without reaching the tail threshold.
    Cutoff,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipVerdict {
    Member(TailCertificate),
    NotMember(Refutation),
    Unknown {
        checked_up_to_k: Option<usize>,
        reason: UnknownReason,
    },
}

impl MembershipVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            MembershipVerdict::Member(_) => "member",
            MembershipVerdict::NotMember(_) => "not_member",
            MembershipVerdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_member(&self) -> bool {
        matches!(self, MembershipVerdict::Member(_))
    }

    pub fn is_not_member(&self) -> bool {
        matches!(self, MembershipVerdict::NotMember(_))
    }

    /// Witness index of a criterion failure.
    pub fn witness_k(&self) -> Option<usize> {
        match self {
            MembershipVerdict::NotMember(Refutation::Lemma { k, .. }) => Some(*k),
            _ => None,
        }
    }

    fn fields(&self) -> Vec<(String, String)> {
        let mut f = vec![("kind".to_string(), self.kind().to_string())];
        let mut put = |k: &str, v: String| f.push((k.to_string(), v));
        match self {
            MembershipVerdict::Member(c) => {
                put("tail_k", c.k_tail.to_string());
                put("a_max", c.a_max.to_string());
                put("q_tail", c.q_tail.to_string());
                let ties: Vec<String> = c.ties.iter().map(|k| k.to_string()).collect();
                put("ties", ties.join(","));
            }
            MembershipVerdict::NotMember(Refutation::Lemma { k, lhs }) => {
                put("witness", "criterion".into());
                put("witness_k", k.to_string());
                let e = lhs.enclose(64);
                put("lhs_lo", e.lo().to_string());
                put("lhs_hi", e.hi().to_string());
                put("lhs", lhs.to_text());
            }
            MembershipVerdict::NotMember(Refutation::Rational { p, q }) => {
                put("witness", "rational".into());
                put("p", p.to_string());
                put("q", q.to_string());
            }
            MembershipVerdict::Unknown {
                checked_up_to_k,
                reason,
            } => {
                put(
                    "checked_up_to_k",
                    checked_up_to_k.map_or("none".into(), |k| k.to_string()),
                );
                match reason {
                    UnknownReason::TauOne {
                        bounded_type_candidate,
                    } => {
                        put("reason", "tau_one".into());
                        put("bounded_type_candidate", bounded_type_candidate.to_string());
                    }
                    UnknownReason::Precision { k, bits } => {
                        put("reason", "precision".into());
                        put("at_k", k.to_string());
                        put("bits", bits.to_string());
                    }
                    UnknownReason::Cutoff => put("reason", "cutoff".into()),
                }
            }
        }
        f
    }

    /// `key=value` lines sorted by key, for diffing.
    pub fn to_record(&self) -> String {
        report::record(self.fields())
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "kind": self.kind() });
        let m = v.as_object_mut().expect("object");
        match self {
            MembershipVerdict::Member(c) => {
                m.insert(
                    "tail_certificate".into(),
                    json!({
                        "tail_k": c.k_tail,
                        "a_max": report::int(&c.a_max),
                        "q_tail": report::int(&c.q_tail),
                        "ties": c.ties,
                    }),
                );
            }
            MembershipVerdict::NotMember(Refutation::Lemma { k, lhs }) => {
                let e = lhs.enclose(64);
                m.insert(
                    "witness".into(),
                    json!({
                        "type": "criterion",
                        "k": k,
                        "lhs": report::real(lhs),
                        "lhs_lo": e.lo().to_string(),
                        "lhs_hi": e.hi().to_string(),
                    }),
                );
            }
            MembershipVerdict::NotMember(Refutation::Rational { p, q }) => {
                m.insert(
                    "witness".into(),
                    json!({ "type": "rational", "p": report::int(p), "q": report::int(q) }),
                );
            }
            MembershipVerdict::Unknown {
                checked_up_to_k,
                reason,
            } => {
                m.insert("checked_up_to_k".into(), json!(checked_up_to_k));
                let r = match reason {
                    UnknownReason::TauOne {
                        bounded_type_candidate,
                    } => json!({ "type": "tau_one", "bounded_type_candidate": bounded_type_candidate }),
                    UnknownReason::Precision { k, bits } => {
                        json!({ "type": "precision", "k": k, "bits": bits })
                    }
                    UnknownReason::Cutoff => json!({ "type": "cutoff" }),
                };
                m.insert("reason".into(), r);
            }
        }
        v
    }
}

/// `y_k = q_{k+1} + q_k / a'_{k+2}`, so that the left side is `y_k / q_k^tau`.
fn lemma_numerator(cf: &CFExpansion, k: usize) -> Result<(QuadNum, BigInt)> {
    let qk = cf.q(k as i64)?;
    let qk1 = cf.q(k as i64 + 1)?;
    let tail = cf.complete_quotient(k + 2)?;
    let y = &QuadNum::from_int(qk1) + &QuadNum::from_int(qk.clone()).checked_div(&tail)?;
    Ok((y, qk))
}

/// Left side of the criterion at `k`: exact when `q_k^tau` reduces, otherwise
/// an enclosure at `prec` bits.
pub fn lemma_lhs(cf: &CFExpansion, k: usize, params: &DiophParams, prec: u32) -> Result<Real> {
    let (y, qk) = lemma_numerator(cf, k)?;
    let pow = power_enclosure(&qk, params.tau(), prec);
    Ok(Real::Exact(y)
        .div(&pow, prec)
        .expect("q^tau is positive"))
}

/// Order of the left side at `k` against `1/gamma`; `None` when precision
/// runs out without an exact route.
pub fn lemma_check(
    cf: &CFExpansion,
    k: usize,
    params: &DiophParams,
    policy: &PrecisionPolicy,
) -> Result<Option<Ordering>> {
    let Some(inv_gamma) = params.inv_gamma() else {
        return Ok(Some(Ordering::Less));
    };
    let (y, qk) = lemma_numerator(cf, k)?;
    Ok(compare_to_power(&y, &inv_gamma, &qk, params.tau(), 0, policy))
}

/// Decides membership of `xi` in `D(gamma, tau)`.
pub fn is_member(xi: &QuadNum, params: &DiophParams, settings: &Settings) -> Result<MembershipVerdict> {
    let cf = expand(xi, settings.expand_limit)?;
    is_member_cf(&cf, params, settings)
}

/// [`is_member`] on an existing expansion.
pub fn is_member_cf(
    cf: &CFExpansion,
    params: &DiophParams,
    settings: &Settings,
) -> Result<MembershipVerdict> {
    if params.class() == ParamClass::Everything {
        return Ok(MembershipVerdict::Member(TailCertificate {
            k_tail: 0,
            a_max: cf.period_max(),
            q_tail: BigInt::one(),
            ties: Vec::new(),
        }));
    }
    if let QuadNum::Rat(r) = cf.source() {
        return Ok(MembershipVerdict::NotMember(Refutation::Rational {
            p: r.numer().clone(),
            q: r.denom().clone(),
        }));
    }
    let policy = &settings.policy;
    let tau_above_one = params.tau().cmp_one() == Ordering::Greater;
    let a_max = cf.period_max();
    let tail_y = params.gamma() * &QuadNum::from_int(&a_max + 2);
    let one = QuadNum::one();
    let limit = if tau_above_one {
        settings.max_k
    } else {
        settings.tau_one_cutoff
    };
    let mut ties = Vec::new();
    for k in 0..limit {
        if tau_above_one && k >= cf.preperiod().len() {
            let qk = cf.q(k as i64)?;
            // gamma (A + 2) <= q_k^(tau - 1)
            let c = compare_to_power(&tail_y, &one, &qk, params.tau(), -1, policy);
            if matches!(c, Some(Ordering::Less) | Some(Ordering::Equal)) {
                return Ok(MembershipVerdict::Member(TailCertificate {
                    k_tail: k,
                    a_max,
                    q_tail: qk,
                    ties,
                }));
            }
        }
        match lemma_check(cf, k, params, policy)? {
            Some(Ordering::Less) => {}
            Some(Ordering::Equal) => ties.push(k),
            Some(Ordering::Greater) => {
                let lhs = lemma_lhs(cf, k, params, policy.start)?;
                return Ok(MembershipVerdict::NotMember(Refutation::Lemma { k, lhs }));
            }
            None => {
                return Ok(MembershipVerdict::Unknown {
                    checked_up_to_k: k.checked_sub(1),
                    reason: UnknownReason::Precision {
                        k,
                        bits: policy.max,
                    },
                })
            }
        }
    }
    let checked_up_to_k = limit.checked_sub(1);
    Ok(MembershipVerdict::Unknown {
        checked_up_to_k,
        reason: if tau_above_one {
            UnknownReason::Cutoff
        } else {
            UnknownReason::TauOne {
                bounded_type_candidate: true,
            }
        },
    })
}
