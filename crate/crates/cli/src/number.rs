//! Exact parsing of numeric inputs: integers, decimals with optional
//! exponent, and fractions such as `1/24`.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let den = parse_decimal(den)?;
        if den.is_zero() {
            return Err(format!("zero denominator in {text:?}"));
        }
        return Ok(parse_decimal(num)? / den);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Result<BigRational, String> {
    let bad = || format!("not a number: {text:?}");
    let text = text.trim();
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(digits * Pow::pow(&ten, scale as u32))
    } else {
        BigRational::new(digits, Pow::pow(&ten, scale.unsigned_abs()))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Fraction when the denominator is small, decimal otherwise.
pub fn display_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else if q.denom().abs() <= BigInt::from(1_000_000) {
        format!("{}/{}", q.numer(), q.denom())
    } else {
        format!("{}", to_f64(q))
    }
}

/// Display of a float bound, recovering a short fraction where one is
/// within rounding.
pub fn display_bound(v: f64) -> String {
    match Rational64::approximate_float(v) {
        Some(q)
            if q.denom().abs() <= 10_000
                && (q.to_f64().unwrap_or(f64::NAN) - v).abs() <= 1e-12 * v.abs().max(1.0) =>
        {
            display_rational(&BigRational::new((*q.numer()).into(), (*q.denom()).into()))
        }
        _ => format!("{v}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("1/24").unwrap(), q(1, 24));
        assert_eq!(parse_rational("0.2").unwrap(), q(1, 5));
        assert_eq!(parse_rational("-1.5e2").unwrap(), q(-150, 1));
        assert_eq!(parse_rational("2.5e-1").unwrap(), q(1, 4));
        assert_eq!(parse_rational(".5/2").unwrap(), q(1, 4));
        assert_eq!(parse_rational("24").unwrap(), q(24, 1));
        assert_eq!(
            parse_rational("0.041666667").unwrap(),
            q(41_666_667, 1_000_000_000)
        );
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1..2", "0x10", "1e", "--1", "."] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn bounds_display_as_fractions() {
        assert_eq!(display_bound(1.0 / 25.0), "1/25");
        assert_eq!(display_bound(0.96), "24/25");
        assert_eq!(
            display_bound(std::f64::consts::PI),
            format!("{}", std::f64::consts::PI)
        );
    }
}
