//! Exact rationals: parsing, decimal rendering and the JSON shape used in reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as a rational (try 1e-9, 0.001 or 1/1000)")]
pub struct ParseRationalError(pub String);

/// Parses `3`, `-0.25`, `1e-9`, `2.5E3` or `1/1000`.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| err())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Decimal rendering truncated toward zero after `digits` fractional digits.
pub fn to_decimal(r: &BigRational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scaled = (a.numer() * num_traits::pow(BigInt::from(10), digits)) / a.denom();
    let s = scaled.to_string();
    let s = if s.len() <= digits { format!("{}{s}", "0".repeat(digits + 1 - s.len())) } else { s };
    let (int_part, frac_part) = s.split_at(s.len() - digits);
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if neg && !(scaled.is_zero()) { "-" } else { "" };
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `1/n`.
pub fn reciprocal(n: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(n))
}

/// Serializes as `{"num": "...", "den": "...", "decimal": "..."}`.
pub fn serialize<S: Serializer>(r: &BigRational, serializer: S) -> Result<S::Ok, S::Error> {
    RationalJson::from(r).serialize(serializer)
}

pub fn serialize_opt<S: Serializer>(r: &Option<BigRational>, serializer: S) -> Result<S::Ok, S::Error> {
    r.as_ref().map(RationalJson::from).serialize(serializer)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
    pub decimal: String,
}

impl From<&BigRational> for RationalJson {
    fn from(r: &BigRational) -> Self {
        RationalJson { num: r.numer().to_string(), den: r.denom().to_string(), decimal: to_decimal(r, 15) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("1e-9").unwrap(), ratio(1, 1_000_000_000));
        assert_eq!(parse_rational("0.001").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rational("1/1000").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rational("-2.5E1").unwrap(), ratio(-25, 1));
        assert_eq!(parse_rational("3").unwrap(), ratio(3, 1));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        for bad in ["", "abc", "1/0", "1e", "1.2.3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&ratio(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&ratio(-7, 2), 5), "-3.5");
        assert_eq!(to_decimal(&ratio(1, 20), 15), "0.05");
        assert_eq!(to_decimal(&ratio(4, 1), 3), "4");
        assert_eq!(to_decimal(&ratio(-1, 10_000), 2), "0");
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_value(RationalJson::from(&ratio(1, 68))).unwrap();
        assert_eq!(j["num"], "1");
        assert_eq!(j["den"], "68");
        assert!(j["decimal"].as_str().unwrap().starts_with("0.01470588"));
    }
}
