//! Exact closed-form reals: `r + Σ q_p·log2(p)` with rational `r`, `q_p` and
//! odd primes `p`.
//!
//! `log2(2)` is folded into the rational part, so the remaining basis
//! `{1} ∪ {log2 p : p odd prime}` is linearly independent over the rationals
//! and every value has exactly one representation. Equality is therefore
//! decided symbolically; only strict ordering falls back to interval
//! evaluation.

mod closed_form;
mod factor;
mod interval;

pub use closed_form::ClosedForm;
pub use factor::{factorize, is_probable_prime};
pub use interval::{log2_enclosure, DyadicInterval};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `num/den`, an integer, or an exact decimal literal such as `0.49`
/// or `-1.25e-2`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

pub fn ceil_rational(q: &Rational) -> BigInt {
    q.numer().div_ceil(q.denom())
}

pub fn floor_rational(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

/// Rounds to the nearest integer, halves away from zero.
pub fn round_rational(q: &Rational) -> BigInt {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if q.is_negative() {
        -floor_rational(&(-q + half))
    } else {
        floor_rational(&(q + half))
    }
}

/// Writes `n / 10^digits` as a fixed-point decimal string.
pub(crate) fn format_scaled_decimal(n: &BigInt, digits: usize) -> String {
    let negative = n.is_negative() && !n.is_zero();
    let mag = n.abs().to_string();
    let padded = if mag.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
    } else {
        mag
    };
    let split = padded.len() - digits;
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{padded}")
    } else {
        format!("{sign}{}.{}", &padded[..split], &padded[split..])
    }
}

/// Exact decimal rendering of a rational, correctly rounded to `digits`
/// places after the point.
pub fn rational_to_decimal(q: &Rational, digits: usize) -> String {
    let scaled = q * Rational::from_integer(num_traits::pow(BigInt::from(10u32), digits));
    format_scaled_decimal(&round_rational(&scaled), digits)
}
