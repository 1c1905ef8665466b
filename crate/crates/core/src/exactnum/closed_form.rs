use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use super::interval::{log2_enclosure, DyadicInterval};
use super::{factorize, format_scaled_decimal, parse_rational, rational_to_decimal, Rational};
use crate::error::{Error, Result};

/// `rational + Σ coeff_p · log2(p)` over odd primes `p`, zero coefficients
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosedForm {
    rational: Rational,
    logs: BTreeMap<BigUint, Rational>,
}

impl Default for ClosedForm {
    fn default() -> Self {
        ClosedForm::zero()
    }
}

impl ClosedForm {
    pub fn zero() -> Self {
        ClosedForm { rational: Rational::zero(), logs: BTreeMap::new() }
    }

    pub fn from_rational(q: Rational) -> Self {
        ClosedForm { rational: q, logs: BTreeMap::new() }
    }

    /// Exact `log2(q)` for `q > 0`.
    pub fn log2(q: &Rational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Domain(format!("log2 of non-positive value {q}")));
        }
        let mut out = ClosedForm::zero();
        let num = q.numer().magnitude();
        let den = q.denom().magnitude();
        for (p, e) in factorize(num) {
            out.add_log_term(p, Rational::from_integer(BigInt::from(e)));
        }
        for (p, e) in factorize(den) {
            out.add_log_term(p, -Rational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    /// `q · log2(q)`, with the convention `0·log2(0) = 0`.
    pub fn x_log2_x(q: &Rational) -> Result<Self> {
        if q.is_zero() {
            return Ok(ClosedForm::zero());
        }
        Ok(ClosedForm::log2(q)?.scale(q))
    }

    fn add_log_term(&mut self, prime: BigUint, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        if prime == BigUint::from(2u32) {
            self.rational += coeff;
            return;
        }
        let entry = self.logs.entry(prime).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.logs.retain(|_, c| !c.is_zero());
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    /// Coefficients of `log2(p)` for odd primes `p`, ascending.
    pub fn log_terms(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.logs.iter()
    }

    pub fn log_coefficient(&self, prime: u64) -> Rational {
        self.logs.get(&BigUint::from(prime)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.logs.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.logs.is_empty()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return ClosedForm::zero();
        }
        ClosedForm {
            rational: &self.rational * q,
            logs: self.logs.iter().map(|(p, c)| (p.clone(), c * q)).collect(),
        }
    }

    /// Encloses the value on the grid `2^-precision`.
    pub fn enclose(&self, precision: u32) -> DyadicInterval {
        let mut acc = DyadicInterval::from_rational(&self.rational, precision);
        for (p, c) in &self.logs {
            acc = acc + log2_enclosure(p, precision).scale(c);
        }
        acc
    }

    pub fn signum(&self) -> Ordering {
        if self.logs.is_empty() {
            return self.rational.cmp(&Rational::zero());
        }
        // a non-zero log combination is irrational, so refinement terminates
        let mut precision = 64;
        loop {
            if let Some(sign) = self.enclose(precision).sign() {
                return sign;
            }
            precision *= 2;
        }
    }

    /// Correctly rounded decimal with `digits` places after the point
    /// (halves away from zero; a tie can only occur for rational values).
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.logs.is_empty() {
            return rational_to_decimal(&self.rational, digits);
        }
        let ten_pow = Rational::from_integer(num_traits::pow(BigInt::from(10u32), digits));
        let mut precision = (4 * digits as u32).max(16) + 64;
        loop {
            let iv = self.enclose(precision);
            let lo = super::round_rational(&(iv.low_rational() * &ten_pow));
            let hi = super::round_rational(&(iv.high_rational() * &ten_pow));
            if lo == hi {
                return format_scaled_decimal(&lo, digits);
            }
            precision *= 2;
        }
    }

    /// Nearest `f64`, for plotting and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let iv = self.enclose(80);
        let mid = (iv.low_rational() + iv.high_rational()) / Rational::from_integer(2.into());
        ratio_to_f64(&mid)
    }
}

fn ratio_to_f64(q: &Rational) -> f64 {
    let n = q.numer();
    let d = q.denom();
    let shift = (n.bits() as i64 - d.bits() as i64 - 60).max(-2000);
    let scaled = if shift >= 0 {
        Rational::new(n.clone(), d << shift as usize)
    } else {
        Rational::new(n << (-shift) as usize, d.clone())
    };
    let int = super::floor_rational(&scaled);
    let f: f64 = int.to_string().parse().unwrap_or(0.0);
    f * 2f64.powi(shift as i32)
}

impl Ord for ClosedForm {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        (self - other).signum()
    }
}

impl PartialOrd for ClosedForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for ClosedForm {
    fn from(q: Rational) -> Self {
        ClosedForm::from_rational(q)
    }
}

impl<'a> Add<&'a ClosedForm> for &'a ClosedForm {
    type Output = ClosedForm;

    fn add(self, rhs: &ClosedForm) -> ClosedForm {
        let mut out = self.clone();
        out.rational += &rhs.rational;
        for (p, c) in &rhs.logs {
            out.add_log_term(p.clone(), c.clone());
        }
        out
    }
}

impl Add for ClosedForm {
    type Output = ClosedForm;

    fn add(self, rhs: ClosedForm) -> ClosedForm {
        &self + &rhs
    }
}

impl<'a> Add<&'a Rational> for &'a ClosedForm {
    type Output = ClosedForm;

    fn add(self, rhs: &Rational) -> ClosedForm {
        let mut out = self.clone();
        out.rational += rhs;
        out
    }
}

impl Neg for &ClosedForm {
    type Output = ClosedForm;

    fn neg(self) -> ClosedForm {
        self.scale(&-Rational::one())
    }
}

impl Neg for ClosedForm {
    type Output = ClosedForm;

    fn neg(self) -> ClosedForm {
        -&self
    }
}

impl<'a> Sub<&'a ClosedForm> for &'a ClosedForm {
    type Output = ClosedForm;

    fn sub(self, rhs: &ClosedForm) -> ClosedForm {
        self + &(-rhs)
    }
}

impl Sub for ClosedForm {
    type Output = ClosedForm;

    fn sub(self, rhs: ClosedForm) -> ClosedForm {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Rational> for &'a ClosedForm {
    type Output = ClosedForm;

    fn mul(self, rhs: &Rational) -> ClosedForm {
        self.scale(rhs)
    }
}

impl std::iter::Sum for ClosedForm {
    fn sum<I: Iterator<Item = ClosedForm>>(iter: I) -> Self {
        iter.fold(ClosedForm::zero(), |a, b| &a + &b)
    }
}

/// Canonical form `r + (q_3)·log2(3) + (q_5)·log2(5) + …`, primes ascending.
impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        for (p, c) in &self.logs {
            write!(f, " + ({c})·log2({p})")?;
        }
        Ok(())
    }
}

/// Accepts the canonical form, with `*` allowed in place of `·` and any
/// positive integer (not only primes) inside `log2(…)`.
impl FromStr for ClosedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a closed-form number: {s:?}"));
        let mut parts = s.split(" + ");
        let head = parts.next().ok_or_else(bad)?;
        let mut out = ClosedForm::from_rational(parse_rational(head)?);
        for term in parts {
            let term = term.trim();
            let (coeff, arg) = term
                .split_once(")·log2(")
                .or_else(|| term.split_once(")*log2("))
                .ok_or_else(bad)?;
            let coeff = parse_rational(coeff.strip_prefix('(').ok_or_else(bad)?)?;
            let arg: BigUint = arg.strip_suffix(')').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            if arg.is_zero() {
                return Err(bad());
            }
            let log = ClosedForm::log2(&Rational::from_integer(BigInt::from_biguint(Sign::Plus, arg)))?;
            out = &out + &log.scale(&coeff);
        }
        Ok(out)
    }
}
