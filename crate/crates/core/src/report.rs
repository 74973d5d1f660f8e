//! JSON and `key=value` renderings shared by the record formats.
//!
//! Real values are written as `{"exact": ..., "display": ...}` where `exact`
//! is the canonical text form and `display` a 20-digit decimal that is for
//! reading only.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::exactnum::{QuadNum, Rational, Real};

pub fn real(x: &Real) -> Value {
    json!({ "exact": x.to_text(), "display": x.display_decimal() })
}

pub fn quad(x: &QuadNum) -> Value {
    real(&Real::Exact(x.clone()))
}

pub fn rational(x: &Rational) -> Value {
    quad(&QuadNum::Rat(x.clone()))
}

/// Integers fitting in 64 bits become JSON numbers, larger ones strings.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// `key=value` lines in key order.
pub fn record(mut fields: Vec<(String, String)>) -> String {
    fields.sort();
    let mut out = String::new();
    for (k, v) in fields {
        out.push_str(&k);
        out.push('=');
        out.push_str(&v);
        out.push('\n');
    }
    out
}
