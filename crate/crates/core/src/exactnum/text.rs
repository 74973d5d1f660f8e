//! Text forms.
//!
//! * quadratic values: `(a+b*sqrt(d))/c` (or `(a-b*sqrt(d))/c`), rationals as
//!   `p/q`, plus the aliases `phi` and `silver`;
//! * exponents: `t=p/q` or `t=log((a+b*sqrt(d))/c)/log(n)`; the `t=` prefix is
//!   optional on input.
//!
//! Printing a parsed canonical string gives back the same string.

use num_bigint::BigInt;

use super::exponent::Exponent;
use super::quad::{qi_make, QuadNum};
use super::rational;
use crate::error::{Error, Result};

fn parse_int(s: &str, whole: &str) -> Result<BigInt> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    t.parse()
        .map_err(|_| Error::parse(whole, format!("`{s}` is not an integer")))
}

/// Parses `a+b*sqrt(d)` (the part inside the parentheses).
fn parse_surd_body(body: &str, whole: &str) -> Result<(BigInt, BigInt, BigInt)> {
    let idx = body
        .find("sqrt(")
        .ok_or_else(|| Error::parse(whole, "expected sqrt(d)"))?;
    let close = body[idx..]
        .find(')')
        .map(|i| i + idx)
        .ok_or_else(|| Error::parse(whole, "unclosed sqrt("))?;
    if close + 1 != body.len() {
        return Err(Error::parse(whole, "trailing text after sqrt(d)"));
    }
    let d = parse_int(&body[idx + 5..close], whole)?;
    let head = &body[..idx];
    let head = head.strip_suffix('*').unwrap_or(head);
    // Split `head` into `a` and the signed coefficient of the radical.
    let split = head
        .char_indices()
        .find(|&(i, ch)| i > 0 && (ch == '+' || ch == '-'))
        .map(|(i, _)| i);
    let (a_str, b_str) = match split {
        Some(i) => (&head[..i], &head[i..]),
        None => ("0", head),
    };
    let a = parse_int(a_str, whole)?;
    let b = match b_str {
        "" | "+" => BigInt::from(1),
        "-" => BigInt::from(-1),
        s => parse_int(s, whole)?,
    };
    Ok((a, b, d))
}

/// Parses a rational or quadratic value.
pub fn parse_quad(s: &str) -> Result<QuadNum> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    match t.as_str() {
        "phi" | "golden" => return qi_make(1, 1, 2, 5),
        "silver" => return qi_make(1, 1, 1, 2),
        _ => {}
    }
    if !t.contains("sqrt") {
        return rational::parse(&t).map(QuadNum::Rat).map_err(|_| {
            Error::parse(s, "expected p/q, (a+b*sqrt(d))/c, phi or silver")
        });
    }
    let (body, c) = if let Some(rest) = t.strip_prefix('(') {
        let close = matching_paren(&t, 0).ok_or_else(|| Error::parse(s, "unbalanced parentheses"))?;
        let body = &rest[..close - 1];
        let tail = &t[close + 1..];
        let c = if tail.is_empty() {
            BigInt::from(1)
        } else {
            let c = tail
                .strip_prefix('/')
                .ok_or_else(|| Error::parse(s, "expected /c after the parenthesis"))?;
            parse_int(c, s)?
        };
        (body.to_string(), c)
    } else {
        (t.clone(), BigInt::from(1))
    };
    let (a, b, d) = parse_surd_body(&body, s)?;
    qi_make(a, b, c, d).map_err(|e| Error::parse(s, e.to_string()))
}

fn matching_paren(s: &str, open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices().skip(open) {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Parses an exponent in either form.
pub fn parse_exponent(s: &str) -> Result<Exponent> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.strip_prefix("t=").unwrap_or(&t);
    if let Some(rest) = t.strip_prefix("log(") {
        let close = matching_paren(t, 3).ok_or_else(|| Error::parse(s, "unbalanced log("))?;
        let arg = &rest[..close - 4];
        let tail = &t[close + 1..];
        let n = tail
            .strip_prefix("/log(")
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| Error::parse(s, "expected log(alpha)/log(n)"))?;
        let n = parse_int(n, s)?;
        let alpha = parse_quad(arg)?;
        return Exponent::log_ratio(alpha, n).map_err(|e| Error::parse(s, e.to_string()));
    }
    let r = rational::parse(t)
        .map_err(|_| Error::parse(s, "expected t=p/q or t=log(alpha)/log(n)"))?;
    Exponent::rational(r).map_err(|e| Error::parse(s, e.to_string()))
}
