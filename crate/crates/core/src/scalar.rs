//! Scalar types a joint distribution can be built from.
//!
//! Exact rationals check every identity with zero tolerance. Floats carry the
//! three tolerances used by validation and by the inequality verdicts.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub trait Probability:
    Clone + Debug + PartialOrd + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True when arithmetic on this type is exact.
    const EXACT: bool;

    /// Entries in `[-clamp_tolerance, 0)` are clamped to zero.
    fn clamp_tolerance() -> Self;

    /// Largest accepted `|sum - 1|`.
    fn normalization_tolerance() -> Self;

    /// Slack accepted below zero before a bound counts as violated.
    fn comparison_tolerance() -> Self;

    fn is_finite_value(&self) -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("small integers are representable")
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Probability for f64 {
    const EXACT: bool = false;

    fn clamp_tolerance() -> Self {
        1e-12
    }

    fn normalization_tolerance() -> Self {
        1e-9
    }

    fn comparison_tolerance() -> Self {
        1e-12
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

// Single precision keeps ~7 digits; the double-precision budgets scaled to that.
impl Probability for f32 {
    const EXACT: bool = false;

    fn clamp_tolerance() -> Self {
        1e-6
    }

    fn normalization_tolerance() -> Self {
        1e-5
    }

    fn comparison_tolerance() -> Self {
        1e-6
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Probability for BigRational {
    const EXACT: bool = true;

    fn clamp_tolerance() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }

    fn normalization_tolerance() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }

    fn comparison_tolerance() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }

    fn is_finite_value(&self) -> bool {
        true
    }
}

/// Parses a decimal (`0.4`, `-1.5e-3`) or fraction (`2/5`) literal exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(num, den));
    }

    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(idx) => (&text[..idx], text[idx + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = all_digits.parse().ok()?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Exact rational with the same decimal text as the shortest round-trip
/// representation of `x`, so `0.4_f64` becomes exactly `2/5`.
pub fn rational_from_f64_decimal(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    parse_rational(&format!("{x:e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("0.4"), Some(ratio(2, 5)));
        assert_eq!(parse_rational("-0.1"), Some(ratio(-1, 10)));
        assert_eq!(parse_rational("2.5E+2"), Some(ratio(250, 1)));
        assert_eq!(parse_rational("1e-3"), Some(ratio(1, 1000)));
        assert_eq!(parse_rational(" 1/4 "), Some(ratio(1, 4)));
        assert_eq!(parse_rational(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
        assert_eq!(parse_rational("deg:30"), None);
    }

    #[test]
    fn shortest_decimal_of_float() {
        assert_eq!(rational_from_f64_decimal(0.4), Some(ratio(2, 5)));
        assert_eq!(rational_from_f64_decimal(0.1), Some(ratio(1, 10)));
        assert_eq!(rational_from_f64_decimal(-0.25), Some(ratio(-1, 4)));
        assert_eq!(rational_from_f64_decimal(f64::NAN), None);
    }

    #[test]
    fn exact_type_has_zero_tolerances() {
        assert_eq!([BigRational::EXACT, f64::EXACT], [true, false]);
        assert_eq!(BigRational::comparison_tolerance(), ratio(0, 1));
        assert_eq!(f64::normalization_tolerance(), 1e-9);
    }
}
