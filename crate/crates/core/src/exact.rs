//! Arithmetic shared by the double-precision and exact-rational paths.
//!
//! The closed-form parameter formulas are written once against [`Field`]; the
//! `f64` instance is the fast path and the `BigRational` instance is the
//! extended-precision path. Every finite `f64` converts to a rational exactly,
//! so the rational path evaluates the formulas with no rounding at all and
//! only rounds once when a result is read back as `f64`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Field:
    Clone
    + PartialOrd
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn from_i64(i: i64) -> Self;
    fn to_f64(&self) -> f64;

    fn zero() -> Self {
        Self::from_i64(0)
    }
    fn one() -> Self {
        Self::from_i64(1)
    }
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    fn sq(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Field for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_i64(i: i64) -> Self {
        i as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Field for BigRational {
    /// Panics on non-finite input; callers validate first.
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }
    fn from_i64(i: i64) -> Self {
        BigRational::from_integer(BigInt::from(i))
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Nearest-ish `f64` for a rational of any magnitude.
///
/// `ToPrimitive` handles the common range; numerator and denominator can each
/// overflow `f64` while the ratio does not, so fall back to a shifted division.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() && (v != 0.0 || Zero::is_zero(r)) {
            return v;
        }
    }
    let neg = r.is_negative();
    let n = r.numer().abs();
    let d = r.denom().clone();
    let shift = n.bits() as i64 - d.bits() as i64;
    // bring the quotient into [2^63, 2^65) before dividing
    let target = 64 - shift;
    let q = if target >= 0 {
        (n << target as usize) / d
    } else {
        n / (d << (-target) as usize)
    };
    let mant = q.to_f64().unwrap_or(f64::INFINITY);
    let v = mant * 2f64.powi((-target).clamp(-2000, 2000) as i32);
    if neg {
        -v
    } else {
        v
    }
}

/// Parse a decimal literal (`"0.1"`, `"-2.5e-3"`, `"7"`, `"3/7"`) into an
/// exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let err = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("{msg}: {text:?}"),
    };
    if s.is_empty() {
        return Err(err("empty number"));
    }
    if let Some((a, b)) = s.split_once('/') {
        let num = parse_rational(a)?;
        let den = parse_rational(b)?;
        if Zero::is_zero(&den) {
            return Err(err("zero denominator"));
        }
        return Ok(num / den);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| err("bad exponent"))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err("invalid digit"));
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all.parse::<BigInt>().map_err(|_| err("invalid digits"))?);
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return Err(err("exponent out of range"));
    }
    let ten = BigRational::from_integer(BigInt::from(10));
    let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
    value = if scale >= 0 { value * p } else { value / p };
    Ok(if neg { -value } else { value })
}

/// Exact square root of a non-negative rational, if both parts are perfect
/// squares.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_decimals() {
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("-2.5e-3").unwrap(), q(-1, 400));
        assert_eq!(parse_rational("1e3").unwrap(), q(1000, 1));
        assert_eq!(parse_rational("3/7").unwrap(), q(3, 7));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn float_round_trip_is_exact() {
        for x in [0.1, 3.89e-40, 2.85e-67, 1.602_176_634e-19, -7.25, 1e300] {
            let r = <BigRational as Field>::from_f64(x);
            assert_eq!(ratio_to_f64(&r), x);
        }
    }

    #[test]
    fn tiny_and_huge_ratios() {
        let tiny = <BigRational as Field>::from_f64(1e-300) * <BigRational as Field>::from_f64(1e-300);
        let v = ratio_to_f64(&tiny);
        assert_eq!(v, 0.0); // below f64 range
        let r = <BigRational as Field>::from_f64(3.0e-200) / <BigRational as Field>::from_f64(1.5e-100);
        assert!((ratio_to_f64(&r) / 2e-100 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(rational_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(rational_sqrt(&q(2, 1)), None);
        assert_eq!(rational_sqrt(&q(-1, 1)), None);
    }
}
