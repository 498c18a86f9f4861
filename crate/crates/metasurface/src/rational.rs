//! Exact rational arithmetic helpers shared across the crate.
//!
//! All losses, probabilities, and game values are [`Rational`]s; floating
//! point appears only in Monte Carlo estimates and reports. On the wire a
//! rational is always the string `"num/den"` in lowest terms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Formats as `num/den` with an explicit denominator, e.g. `0/1`, `3/4`, `2/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
    if den.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Lossy conversion for Monte Carlo estimates and reports.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back through a reduced float division for huge components.
        let n = r.numer().to_f64().unwrap_or(f64::MAX * r.numer().signum().to_f64().unwrap_or(1.0));
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Exponentiation by squaring with a machine-integer exponent.
pub fn pow(base: &Rational, mut exp: u64) -> Rational {
    let mut result = Rational::one();
    let mut base = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result *= &base;
        }
        exp >>= 1;
        if exp > 0 {
            base = &base * &base;
        }
    }
    result
}

pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0/1", "1/2", "7/3", "-2/5", "4/1"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
    }

    #[test]
    fn parse_reduces_and_accepts_integers() {
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("3").unwrap(), from_int(3));
        assert_eq!(parse_rational(" 1 / 8 ").unwrap(), ratio(1, 8));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(parse_rational(""), Err(ParseRationalError::Empty)));
        assert!(parse_rational("a/b").is_err());
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let b = ratio(2, 3);
        let mut acc = Rational::one();
        for e in 0..8u64 {
            assert_eq!(pow(&b, e), acc);
            acc *= &b;
        }
    }
}
