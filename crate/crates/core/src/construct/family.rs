//! The silver-ratio family: `alpha = (n + sqrt(n^2 + 4))/2`, `gamma = 1/alpha`,
//! `tau = log(alpha)/log(n)`. Then `alpha = [n; (n)]`, `n^tau = alpha`, and
//! `alpha` is squeezed between `I(n, 1)` and `I(n^2 + 1, n)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::contfrac::expand;
use crate::diocore::{DiophParams, Settings};
use crate::error::{Error, Result};
use crate::exactnum::{compare_to_power, power_enclosure, qi_make, Exponent, QuadNum, Rational, Real};
use crate::gapscan::{certify_isolated, IsolationCertificate};
use crate::report;

/// Number of convergents checked against `p_1/q_1` before the tail
/// certificate takes over (at least its `k_tail`).
const PREFIX: usize = 12;

#[derive(Clone, Debug)]
pub struct SilverInstance {
    pub n: u64,
    pub alpha: QuadNum,
    pub gamma: QuadNum,
    pub tau: Exponent,
    pub p1: BigInt,
    pub q1: BigInt,
    /// Named exact checks, all of which passed.
    pub checks: Vec<(String, String)>,
    pub certificate: IsolationCertificate,
}

impl SilverInstance {
    pub fn params(&self) -> DiophParams {
        self.certificate.params.clone()
    }

    pub fn to_json(&self) -> Value {
        let checks: serde_json::Map<String, Value> = self
            .checks
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        json!({
            "n": self.n,
            "alpha": report::quad(&self.alpha),
            "gamma": report::quad(&self.gamma),
            "tau": self.tau.to_string(),
            "tau_display": self.tau.enclose(96).to_decimal(20),
            "p1": report::int(&self.p1),
            "q1": report::int(&self.q1),
            "checks": checks,
            "certificate": self.certificate.to_json(),
        })
    }
}

fn fail(what: impl Into<String>) -> Error {
    Error::CertificationFailed(what.into())
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(fail(what))
    }
}

/// Builds and certifies the member of the family with parameter `n >= 2`.
/// Every step of the argument is re-checked exactly; a failure is an error.
pub fn silver_family(n: u64, settings: &Settings) -> Result<SilverInstance> {
    if n < 2 {
        return Err(Error::HypothesisViolation(format!("the family needs n >= 2, got n = {n}")));
    }
    let nb = BigInt::from(n);
    let nq = QuadNum::from_int(n);
    let alpha = qi_make(nb.clone(), 1, 2, &nb * &nb + 4)?;
    let gamma = alpha.inv()?;
    let tau = Exponent::log_ratio(alpha.clone(), n)?;
    let params = DiophParams::new(gamma.clone(), tau.clone())?;
    let mut checks = Vec::new();
    let mut record = |k: &str, v: String| checks.push((k.to_string(), v));

    require(alpha == &nq + &gamma, "alpha = n + 1/alpha")?;
    record("alpha_fixed_point", format!("{alpha} = {n} + 1/alpha"));
    require(
        power_enclosure(&nb, &tau, 64) == Real::Exact(alpha.clone()),
        "n^tau = alpha",
    )?;
    record("n_pow_tau", format!("{n}^tau = {alpha}"));
    require(gamma < QuadNum::from_ratio(1, 2), "gamma < 1/2")?;
    require(tau.cmp_one() == Ordering::Greater, "tau > 1")?;
    record("ranges", "gamma < 1/2, tau > 1".into());

    let cf = expand(&alpha, settings.expand_limit)?;
    require(
        cf.a0() == &nb && cf.preperiod().is_empty() && cf.period() == [nb.clone()],
        "alpha = [n; (n)]",
    )?;
    record("expansion", cf.to_string());

    // k = 0: alpha - n = 1/alpha = gamma
    require((&alpha - &nq).abs() == gamma, "|alpha - n| = gamma")?;
    record("k0_identity", format!("|alpha - {n}| = gamma"));

    // k = 1: p_1/q_1 - alpha = 1/n - 1/alpha = 1/(n alpha^2) = gamma / n^(tau+1)
    let (p1, q1) = cf.convergents(1)?;
    require(p1 == &nb * &nb + 1 && q1 == nb, "p_1 = n^2 + 1, q_1 = n")?;
    let d1 = &QuadNum::Rat(Rational::new(p1.clone(), q1.clone())) - &alpha;
    let via_alpha = (&nq * &alpha.pow(2)).inv()?;
    require(
        d1 == via_alpha && d1 == &QuadNum::Rat(Rational::new(1.into(), nb.clone())) - &gamma,
        "p_1/q_1 - alpha = 1/(n alpha^2)",
    )?;
    require(
        compare_to_power(&gamma, &d1, &q1, &tau, 1, &settings.policy) == Some(Ordering::Equal),
        "p_1/q_1 - alpha = gamma / q_1^(tau+1)",
    )?;
    record("k1_identity", format!("{p1}/{q1} - alpha = gamma / {q1}^(tau+1) = {d1}"));

    let certificate = certify_isolated(
        &alpha,
        &params,
        (nb.clone(), BigInt::from(1)),
        (p1.clone(), q1.clone()),
        settings,
    )
    .map_err(|e| fail(e.to_string()))?;

    // k >= 1: p_k/q_k <= p_1/q_1, q_k >= q_1, q_{k+1} = p_k up to the tail
    let prefix = PREFIX.max(certificate.membership.k_tail + 1);
    let r1 = Rational::new(p1.clone(), q1.clone());
    for k in 1..=prefix {
        let (pk, qk) = cf.convergents(k as i64)?;
        require(Rational::new(pk.clone(), qk.clone()) <= r1, "p_k/q_k <= p_1/q_1")?;
        require(qk >= q1, "q_k >= q_1")?;
        require(cf.q(k as i64 + 1)? == pk, "q_{k+1} = p_k")?;
    }
    record(
        "prefix_chain",
        format!("k = 1..{prefix}: p_k/q_k <= p_1/q_1, q_k >= q_1, q_(k+1) = p_k"),
    );
    record("tail_k", certificate.membership.k_tail.to_string());

    Ok(SilverInstance {
        n,
        alpha,
        gamma,
        tau,
        p1,
        q1,
        checks,
        certificate,
    })
}
