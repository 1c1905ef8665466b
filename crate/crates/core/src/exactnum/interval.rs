use std::ops::Add;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ceil_rational, floor_rational, Rational};

/// Closed interval `[low, high] / 2^precision` with integer endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicInterval {
    pub low: BigInt,
    pub high: BigInt,
    pub precision: u32,
}

impl DyadicInterval {
    pub fn point(value: BigInt, precision: u32) -> Self {
        DyadicInterval { low: value.clone(), high: value, precision }
    }

    /// Tightest enclosure of `q` on the grid `2^-precision`.
    pub fn from_rational(q: &Rational, precision: u32) -> Self {
        let scaled = q * Rational::from_integer(BigInt::one() << precision);
        DyadicInterval { low: floor_rational(&scaled), high: ceil_rational(&scaled), precision }
    }

    /// Enclosure of `q · self`.
    pub fn scale(&self, q: &Rational) -> Self {
        let (n, d) = (q.numer(), q.denom());
        let a = n * &self.low;
        let b = n * &self.high;
        let (lo, hi) = if q.is_negative() { (b, a) } else { (a, b) };
        DyadicInterval { low: lo.div_floor(d), high: hi.div_ceil(d), precision: self.precision }
    }

    pub fn width(&self) -> Rational {
        Rational::new(&self.high - &self.low, BigInt::one() << self.precision)
    }

    pub fn low_rational(&self) -> Rational {
        Rational::new(self.low.clone(), BigInt::one() << self.precision)
    }

    pub fn high_rational(&self) -> Rational {
        Rational::new(self.high.clone(), BigInt::one() << self.precision)
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.low_rational() <= q && q <= &self.high_rational()
    }

    /// `Some(sign)` once the interval excludes zero (or is the point zero).
    pub fn sign(&self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        if self.low.is_positive() {
            Some(Greater)
        } else if self.high.is_negative() {
            Some(Less)
        } else if self.low.is_zero() && self.high.is_zero() {
            Some(Equal)
        } else {
            None
        }
    }
}

impl Add for DyadicInterval {
    type Output = DyadicInterval;

    fn add(self, rhs: DyadicInterval) -> DyadicInterval {
        assert_eq!(self.precision, rhs.precision, "precision mismatch");
        DyadicInterval {
            low: self.low + rhs.low,
            high: self.high + rhs.high,
            precision: self.precision,
        }
    }
}

/// Encloses `log2(n)` for an integer `n ≥ 1` in an interval of width at most
/// `2^-precision` (occasionally wider when a squaring lands too close to 2 to
/// decide a bit; callers refine by raising `precision`).
///
/// Bits of the fractional part are extracted by repeated squaring of the
/// mantissa `m = n / 2^e ∈ [1, 2)`, carrying fixed-point lower and upper
/// bounds so every decided bit is certain.
pub fn log2_enclosure(n: &BigUint, precision: u32) -> DyadicInterval {
    assert!(!n.is_zero(), "log2 of zero");
    let e = n.bits() - 1;
    let work = precision as u64 + 40;
    let (mut lo, mut hi) = if work >= e {
        let v = n.clone() << (work - e);
        (v.clone(), v)
    } else {
        let shift = e - work;
        let lo = n >> shift;
        let hi = if (&lo << shift) == *n { lo.clone() } else { &lo + 1u32 };
        (lo, hi)
    };
    let two = BigUint::one() << (work + 1);
    let mut bits = BigUint::zero();
    let mut decided = 0u32;
    for _ in 0..precision {
        let sq_lo = (&lo * &lo) >> work;
        let hh = &hi * &hi;
        let mut sq_hi = &hh >> work;
        if (&sq_hi << work) != hh {
            sq_hi += 1u32;
        }
        bits <<= 1;
        if sq_lo >= two {
            bits += 1u32;
            lo = sq_lo >> 1;
            hi = (&sq_hi >> 1) + (&sq_hi & BigUint::one());
        } else if sq_hi < two {
            lo = sq_lo;
            hi = sq_hi;
        } else {
            bits >>= 1;
            break;
        }
        decided += 1;
    }
    let spare = precision - decided;
    let low = (BigInt::from(e) << precision) + (BigInt::from_biguint(Sign::Plus, bits) << spare);
    let high = &low + (BigInt::one() << spare);
    DyadicInterval { low, high, precision }
}
