//! Isolation by two touching intervals: `xi` is the right end of `I(p, q)`
//! and the left end of `I(p', q')` while itself lying in `D(gamma, tau)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::diocore::{is_member, DiophParams, MembershipVerdict, ParamClass, Settings, TailCertificate};
use crate::exactnum::{compare_to_power, QuadNum, Rational};
use crate::report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationCertificate {
    pub xi: QuadNum,
    pub params: DiophParams,
    /// `xi - p/q = gamma / q^(tau+1)`.
    pub left: (BigInt, BigInt),
    /// `p'/q' - xi = gamma / q'^(tau+1)`.
    pub right: (BigInt, BigInt),
    pub left_radius: QuadNum,
    pub right_radius: QuadNum,
    pub membership: TailCertificate,
}

/// Why a candidate was not certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertifyFailure {
    /// A clause is false: `clause` is one of `irrational`, `left_identity`,
    /// `right_identity`, `membership`.
    Rejected { clause: &'static str, detail: String },
    /// Nothing is known to be false, but some clause could not be decided.
    Incomplete { detail: String },
}

impl CertifyFailure {
    pub fn is_rejection(&self) -> bool {
        matches!(self, CertifyFailure::Rejected { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            CertifyFailure::Rejected { clause, detail } => {
                json!({ "status": "rejected", "clause": clause, "detail": detail })
            }
            CertifyFailure::Incomplete { detail } => json!({ "status": "incomplete", "detail": detail }),
        }
    }
}

impl fmt::Display for CertifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertifyFailure::Rejected { clause, detail } => write!(f, "rejected ({clause}): {detail}"),
            CertifyFailure::Incomplete { detail } => write!(f, "incomplete: {detail}"),
        }
    }
}

fn frac(p: &BigInt, q: &BigInt) -> QuadNum {
    QuadNum::Rat(Rational::new(p.clone(), q.clone()))
}

/// Checks `d = gamma / q^(tau+1)` exactly; `d` is the signed distance.
fn boundary_identity(
    d: &QuadNum,
    q: &BigInt,
    params: &DiophParams,
    settings: &Settings,
    clause: &'static str,
) -> Result<(), CertifyFailure> {
    if !q.is_positive() {
        return Err(CertifyFailure::Rejected {
            clause,
            detail: format!("denominator {q} is not positive"),
        });
    }
    if !d.is_positive() {
        return Err(CertifyFailure::Rejected {
            clause,
            detail: format!("xi is on the wrong side (distance {d})"),
        });
    }
    if params.gamma().is_zero() {
        return Err(CertifyFailure::Rejected {
            clause,
            detail: "gamma = 0 has empty intervals".into(),
        });
    }
    match compare_to_power(params.gamma(), d, q, params.tau(), 1, &settings.policy) {
        Some(Ordering::Equal) => Ok(()),
        Some(o) => Err(CertifyFailure::Rejected {
            clause,
            detail: format!(
                "gamma is {} than {d} * {q}^(tau+1)",
                if o == Ordering::Less { "smaller" } else { "larger" }
            ),
        }),
        None => Err(CertifyFailure::Incomplete {
            detail: format!("{clause}: no exact route for {q}^(tau+1) and enclosures do not separate"),
        }),
    }
}

/// Certifies that `xi` is an isolated point of `D(gamma, tau)` separated by
/// `I(left)` and `I(right)`. Both identities must hold exactly and `xi` must
/// be a member.
pub fn certify_isolated(
    xi: &QuadNum,
    params: &DiophParams,
    left: (BigInt, BigInt),
    right: (BigInt, BigInt),
    settings: &Settings,
) -> Result<IsolationCertificate, CertifyFailure> {
    if xi.is_rational() {
        return Err(CertifyFailure::Rejected {
            clause: "irrational",
            detail: format!("{xi} is rational"),
        });
    }
    let left_radius = xi - &frac(&left.0, &left.1);
    boundary_identity(&left_radius, &left.1, params, settings, "left_identity")?;
    let right_radius = &frac(&right.0, &right.1) - xi;
    boundary_identity(&right_radius, &right.1, params, settings, "right_identity")?;
    match is_member(xi, params, settings) {
        Ok(MembershipVerdict::Member(membership)) => Ok(IsolationCertificate {
            xi: xi.clone(),
            params: params.clone(),
            left,
            right,
            left_radius,
            right_radius,
            membership,
        }),
        Ok(v @ MembershipVerdict::NotMember(_)) => Err(CertifyFailure::Rejected {
            clause: "membership",
            detail: v.to_record().replace('\n', " "),
        }),
        Ok(v) => Err(CertifyFailure::Incomplete {
            detail: format!("membership: {}", v.to_record().replace('\n', " ")),
        }),
        Err(e) => Err(CertifyFailure::Incomplete {
            detail: format!("membership: {e}"),
        }),
    }
}

impl IsolationCertificate {
    /// Whether `x` lies in one of the two open intervals (exact).
    pub fn excludes(&self, x: &QuadNum) -> bool {
        let inside = |(p, q): &(BigInt, BigInt), r: &QuadNum| {
            let c = frac(p, q);
            let d = (x - &c).abs();
            d < *r
        };
        inside(&self.left, &self.left_radius) || inside(&self.right, &self.right_radius)
    }

    /// Half the smaller radius: the punctured neighbourhood of this size is
    /// covered by the two intervals.
    pub fn neighbourhood(&self) -> QuadNum {
        let r = self.left_radius.clone().min(self.right_radius.clone());
        &r * &QuadNum::from_ratio(1, 2)
    }

    pub fn to_json(&self) -> Value {
        let side = |(p, q): &(BigInt, BigInt), r: &QuadNum| {
            json!({ "p": report::int(p), "q": report::int(q), "radius": report::quad(r) })
        };
        json!({
            "xi": report::quad(&self.xi),
            "gamma": report::quad(self.params.gamma()),
            "tau": self.params.tau().to_string(),
            "left": side(&self.left, &self.left_radius),
            "right": side(&self.right, &self.right_radius),
            "membership": MembershipVerdict::Member(self.membership.clone()).to_json(),
        })
    }

    pub fn to_record(&self) -> String {
        report::record(vec![
            ("xi".into(), self.xi.to_string()),
            ("gamma".into(), self.params.gamma().to_string()),
            ("tau".into(), self.params.tau().to_string()),
            ("left".into(), format!("{}/{}", self.left.0, self.left.1)),
            ("right".into(), format!("{}/{}", self.right.0, self.right.1)),
            ("left_radius".into(), self.left_radius.to_string()),
            ("right_radius".into(), self.right_radius.to_string()),
            ("tail_k".into(), self.membership.k_tail.to_string()),
        ])
    }
}

/// Proof that `D(gamma, tau)` is empty for `gamma >= 1/2`: the `q = 1`
/// intervals `(k - gamma, k + gamma)` leave at most the half-integers, and
/// each of those is the rational `(2k+1)/2`, excluded at `q = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmptinessCertificate {
    pub gamma: QuadNum,
    /// Residues mod 1 left uncovered by `q = 1`.
    pub uncovered: Vec<Rational>,
    /// The `(p, q)` excluding each uncovered residue.
    pub excluded_by: Vec<(i64, i64)>,
}

impl EmptinessCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "gamma": report::quad(&self.gamma),
            "uncovered_mod_1": self.uncovered.iter().map(report::rational).collect::<Vec<_>>(),
            "excluded_by": self.excluded_by.iter().map(|(p, q)| json!({"p": p, "q": q})).collect::<Vec<_>>(),
        })
    }
}

pub fn emptiness_certificate(params: &DiophParams) -> Option<EmptinessCertificate> {
    if params.class() != ParamClass::Empty {
        return None;
    }
    let half = QuadNum::from_ratio(1, 2);
    let (uncovered, excluded_by) = if *params.gamma() == half {
        (vec![Rational::new(1.into(), 2.into())], vec![(1, 2)])
    } else {
        (Vec::new(), Vec::new())
    };
    Some(EmptinessCertificate {
        gamma: params.gamma().clone(),
        uncovered,
        excluded_by,
    })
}
