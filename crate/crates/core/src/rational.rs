//! Exact rationals: parsing, canonical formatting and base-2 logarithms.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?} (expected `num/den` or an integer)")]
pub struct RationalParseError(pub String);

/// Parses `num/den` or a bare integer. Decimal points are rejected so that
/// nothing is silently routed through floating point.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let err = || RationalParseError(text.to_string());
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical `num/den` spelling (always with a denominator).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: u64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `log2(x)` for a positive big integer, accurate to double precision.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return x.to_u64().unwrap_or(u64::MAX).to_f64().unwrap_or(f64::NAN).log2();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    (top.to_u64().unwrap_or(u64::MAX) as f64).log2() + shift as f64
}

/// `log2(num/den)`; `-inf` for zero, NaN for negative values.
pub fn log2_ratio(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return f64::NEG_INFINITY;
    }
    log2_biguint(num) - log2_biguint(den)
}

pub fn log2_rational(value: &Rational) -> f64 {
    match value.numer().sign() {
        Sign::NoSign => f64::NEG_INFINITY,
        Sign::Minus => f64::NAN,
        Sign::Plus => log2_ratio(value.numer().magnitude(), value.denom().magnitude()),
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    // Ratio::to_f64 handles huge numerators/denominators correctly.
    value.to_f64().unwrap_or_else(|| {
        let l = log2_rational(&value.abs());
        let mag = l.exp2();
        if value.is_negative() {
            -mag
        } else {
            mag
        }
    })
}

/// Reduces to lowest terms only when requested; exact capital products are
/// kept unreduced for speed.
pub fn rational_from_parts(num: BigUint, den: BigUint) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_unit_interval(value: &Rational) -> bool {
    !value.is_negative() && value <= &Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("1/64").unwrap(), ratio(1, 64));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("3").unwrap(), ratio(3, 1));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
        assert_eq!(format_rational(&ratio(6, 8)), "3/4");
        assert_eq!(format_rational(&ratio(2, 1)), "2/1");
    }

    #[test]
    fn big_logs() {
        let x = BigUint::from(1u8) << 3000u32;
        assert_eq!(log2_biguint(&x), 3000.0);
        let y = BigUint::from(3u8).pow(1000);
        let expected = 1000.0 * 3f64.log2();
        assert!((log2_biguint(&y) - expected).abs() < 1e-9);
        assert_eq!(log2_rational(&ratio(0, 1)), f64::NEG_INFINITY);
        assert!((log2_rational(&ratio(1, 8)) + 3.0).abs() < 1e-15);
    }
}
