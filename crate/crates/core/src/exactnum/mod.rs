//! Exact arithmetic over the rationals and real quadratic fields, plus
//! certified dyadic enclosures for the quantities that do not reduce
//! (mainly `q^tau` with non-integer `tau`).

pub mod dyadic;
pub mod exponent;
pub mod interval;
pub mod power;
pub mod quad;
pub mod rational;
pub mod text;

pub use dyadic::{Dyadic, Round};
pub use exponent::Exponent;
pub use interval::{enclose_quad, Enclosure};
pub use power::{
    compare_to_power, floor_scaled_power, power_enclosure, power_offset_enclosure, rational_log,
    PrecisionPolicy, Real,
};
pub use quad::{qi_compare, qi_make, QuadIrr, QuadNum};
pub use rational::Rational;
pub use text::{parse_exponent, parse_quad};
