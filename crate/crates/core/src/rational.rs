//! Arbitrary-precision rationals and their text form.
//!
//! Values are `num_rational::BigRational`, which is kept reduced with a
//! positive denominator, so structural equality is value equality.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rational = num_rational::BigRational;

/// `numer / denom` as a reduced rational. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p/q` or a bare integer `p`. Rejects zero denominators, blanks and
/// anything else `BigRational` would not read back identically.
pub fn parse(token: &str) -> Option<Rational> {
    if token.is_empty() || token.contains(char::is_whitespace) {
        return None;
    }
    let value = Rational::from_str(token).ok()?;
    if token.contains('/') {
        let (_, d) = token.split_once('/')?;
        let d = BigInt::from_str(d).ok()?;
        if !d.is_positive() {
            return None;
        }
    }
    Some(value)
}

/// Canonical text: `p/q` reduced, or `p` when the denominator is one.
pub fn format(value: &Rational) -> String {
    value.to_string()
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Float with 12 significant digits, as used in reports.
pub fn format_float(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    format!("{:.11e}", value)
}
