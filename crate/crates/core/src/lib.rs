//! Exact decision procedures for Diophantine sets
//! `D(gamma, tau) = { x : |q x - p| >= gamma / q^tau for all p, q >= 1 }`.
//!
//! * [`exactnum`]: rationals, real quadratic fields, dyadic enclosures;
//! * [`contfrac`]: continued fractions of rationals and quadratic irrationals;
//! * [`diocore`]: parameters, the convergent-based membership decision, a
//!   brute-force oracle and excluded intervals;
//! * [`gapscan`]: excluded-interval covers, measure brackets, touching points
//!   and isolation certificates;
//! * [`construct`]: the silver-ratio family of isolated points and the
//!   equivalent-representative transform.

pub mod construct;
pub mod contfrac;
pub mod diocore;
pub mod error;
pub mod exactnum;
pub mod gapscan;
pub mod par;
pub mod report;

pub use error::{Error, Result};
