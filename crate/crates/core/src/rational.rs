//! Exact rational arithmetic helpers.
//!
//! Every probability, payoff, expectation, and score in this crate is a
//! [`Rational`]. No floating point appears anywhere on a verdict path, so
//! equality checks are exact and re-running an operation is bit-identical.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for `p/q`. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for an integer rational.
pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses a rational from an integer string (`"3"`, `"-2"`) or a fraction
/// string (`"1/4"`, `"-7/3"`). Whitespace, decimals and zero denominators are
/// rejected; the result is normalized to lowest terms.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let parse_int = |s: &str| -> Result<BigInt, String> {
        if s.is_empty() {
            return Err(format!("empty integer in rational '{text}'"));
        }
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("'{text}' is not an integer or p/q rational"));
        }
        s.parse::<BigInt>()
            .map_err(|e| format!("cannot parse '{text}': {e}"))
    };
    match text.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(text)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(format!("zero denominator in rational '{text}'"));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Formats a rational as `"p"` when integral, otherwise `"p/q"`.
/// Inverse of [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Squared Euclidean distance between two equal-length rational vectors.
pub fn squared_distance(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            &d * &d
        })
        .sum()
}

/// True when the rational is negative.
pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}
