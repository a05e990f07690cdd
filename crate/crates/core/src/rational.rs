//! Exact rational scalars.
//!
//! Values are `num_rational::BigRational`, which keeps a positive denominator
//! and a reduced fraction after every operation. This module adds the text
//! encoding used by the JSON formats and the command line: `"p/q"`, or `"p"`
//! when the denominator is one. Parsing also accepts terminating decimal
//! literals (`"0.25"`, `"-1.5e-3"`), which are converted exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `k!` as an exact integer.
pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `x^k / k!`.
pub fn taylor_coefficient(x: &Rational, k: usize) -> Rational {
    Pow::pow(x, k as u32) / Rational::from_integer(factorial(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Canonical text form: `p/q`, or `p` when `q = 1`.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p/q`, an integer, or a terminating decimal literal.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_integer(p.trim(), text)?;
        let q = parse_integer(q.trim(), text)?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in '{text}'")));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(s, text)
}

fn parse_integer(s: &str, whole: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("malformed rational '{whole}'")));
    }
    s.trim_start_matches('+')
        .parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("malformed rational '{whole}': {e}")))
}

fn parse_decimal(s: &str, whole: &str) -> Result<Rational> {
    let malformed = || Error::Parse(format!("malformed rational '{whole}'"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| malformed())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    if exponent.unsigned_abs() > 10_000 {
        return Err(Error::Parse(format!("exponent out of range in '{whole}'")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().map_err(|_| malformed())?);
    let shift = exponent - frac_part.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= Pow::pow(&ten, shift as u32);
    } else {
        value /= Pow::pow(&ten, (-shift) as u32);
    }
    Ok(if negative { -value } else { value })
}

/// Nearest `f64`, exact for moderately sized values.
pub fn to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(p), Some(q)) if p.is_finite() && q.is_finite() => p / q,
        _ => {
            // Scale both parts down to a common bit length before dividing.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let p = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let q = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            p / q
        }
    }
}

/// Sign as -1, 0 or +1.
pub fn signum(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// True when the value has denominator one.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

#[cfg(test)]
pub(crate) fn gcd_is_one(r: &Rational) -> bool {
    use num_integer::Integer;
    r.numer().abs().gcd(r.denom()).is_one() || r.is_zero() && r.denom().is_one()
}

pub mod serde_str {
    //! Serde adapter that stores a rational as its canonical string.
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let lit = super::Literal::deserialize(d)?;
        lit.into_rational().map_err(de::Error::custom)
    }
}

/// A rational as it may appear in JSON input: a string, or a plain integer.
/// Non-integral JSON numbers are rejected so binary floats never become exact values.
#[derive(serde::Deserialize)]
#[serde(untagged)]
pub(crate) enum Literal {
    Text(String),
    Int(i64),
    Float(f64),
}

impl Literal {
    pub(crate) fn into_rational(self) -> Result<Rational> {
        match self {
            Literal::Text(s) => parse(&s),
            Literal::Int(i) => Ok(int(i)),
            Literal::Float(f) => Err(Error::Parse(format!(
                "binary float {f} is not accepted as an exact value; quote it as a string"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse("-4").unwrap(), int(-4));
        assert_eq!(parse("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse("-1.5e-3").unwrap(), frac(-3, 2000));
        assert_eq!(parse("2e3").unwrap(), int(2000));
        assert_eq!(parse(".5").unwrap(), frac(1, 2));
        assert_eq!(parse("1/-2").unwrap(), frac(-1, 2));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1/0", "abc", "1.2.3", "inf", "NaN", "1/2/3", "--1", "e5", "0x10"] {
            assert!(parse(bad).is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format(&frac(6, -4)), "-3/2");
        assert_eq!(format(&frac(8, 4)), "2");
        assert_eq!(format(&int(0)), "0");
        assert!(gcd_is_one(&frac(6, 4)));
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(7), BigInt::from(5040));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(taylor_coefficient(&int(2), 3), frac(4, 3));
    }

    #[test]
    fn to_f64_handles_huge_parts() {
        let big = Rational::new(BigInt::from(10).pow(400u32) * 3, BigInt::from(10).pow(400u32));
        assert_eq!(to_f64(&big), 3.0);
        assert_eq!(to_f64(&frac(1, 3)), 1.0 / 3.0);
    }
}
