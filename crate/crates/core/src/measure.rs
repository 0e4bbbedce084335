use crate::error::Error;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

/// Exact rational scalar used throughout: arbitrary-precision, always in
/// lowest terms (an invariant of `num::BigRational` construction).
pub type Rational = BigRational;

pub(crate) fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// A value in `[0, inf]`: either an exact nonnegative rational or infinity.
///
/// The order is total with `Finite(_) < Infinite`, and addition saturates
/// at infinity. Subtraction is partial; see [`MeasureValue::checked_sub`].
#[derive(Clone, PartialEq, Eq)]
pub enum MeasureValue {
    Finite(Rational),
    Infinite,
}

impl MeasureValue {
    pub fn zero() -> Self {
        MeasureValue::Finite(Rational::zero())
    }

    pub fn from_integer(n: u64) -> Self {
        MeasureValue::Finite(Rational::from_integer(BigInt::from(n)))
    }

    /// Wraps a rational, rejecting negative values.
    pub fn from_ratio(r: Rational) -> Result<Self, Error> {
        if r.is_negative() {
            Err(Error::NegativeMeasure {
                text: r.to_string(),
            })
        } else {
            Ok(MeasureValue::Finite(r))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, MeasureValue::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, MeasureValue::Finite(r) if r.is_zero())
    }

    pub fn as_ratio(&self) -> Option<&Rational> {
        match self {
            MeasureValue::Finite(r) => Some(r),
            MeasureValue::Infinite => None,
        }
    }

    /// `self - other` when that is a well-defined value in `[0, inf]`:
    /// `None` for finite minus larger finite (would be negative), anything
    /// minus infinity, and `inf - inf`.
    pub fn checked_sub(&self, other: &MeasureValue) -> Option<MeasureValue> {
        match (self, other) {
            (MeasureValue::Finite(a), MeasureValue::Finite(b)) => {
                if a >= b {
                    Some(MeasureValue::Finite(a - b))
                } else {
                    None
                }
            }
            (MeasureValue::Infinite, MeasureValue::Finite(_)) => Some(MeasureValue::Infinite),
            (_, MeasureValue::Infinite) => None,
        }
    }
}

impl Add<&MeasureValue> for &MeasureValue {
    type Output = MeasureValue;
    fn add(self, rhs: &MeasureValue) -> MeasureValue {
        match (self, rhs) {
            (MeasureValue::Finite(a), MeasureValue::Finite(b)) => MeasureValue::Finite(a + b),
            _ => MeasureValue::Infinite,
        }
    }
}

impl Add for MeasureValue {
    type Output = MeasureValue;
    fn add(self, rhs: MeasureValue) -> MeasureValue {
        &self + &rhs
    }
}

impl<'a> Sum<&'a MeasureValue> for MeasureValue {
    fn sum<I: Iterator<Item = &'a MeasureValue>>(iter: I) -> MeasureValue {
        iter.fold(MeasureValue::zero(), |acc, v| &acc + v)
    }
}

impl Sum for MeasureValue {
    fn sum<I: Iterator<Item = MeasureValue>>(iter: I) -> MeasureValue {
        iter.fold(MeasureValue::zero(), |acc, v| &acc + &v)
    }
}

/// Exact sum of a family of values; empty sums are zero and infinity is
/// absorbing.
pub fn measure_sum<'a, I>(values: I) -> MeasureValue
where
    I: IntoIterator<Item = &'a MeasureValue>,
{
    values.into_iter().sum()
}

impl PartialOrd for MeasureValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MeasureValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (MeasureValue::Finite(a), MeasureValue::Finite(b)) => a.cmp(b),
            (MeasureValue::Finite(_), MeasureValue::Infinite) => Ordering::Less,
            (MeasureValue::Infinite, MeasureValue::Finite(_)) => Ordering::Greater,
            (MeasureValue::Infinite, MeasureValue::Infinite) => Ordering::Equal,
        }
    }
}

/// Renders `p/q` in lowest terms, bare `p` for integers, `inf` for
/// infinity. [`MeasureValue::from_str`] accepts exactly these shapes, so
/// the round trip is bit-exact.
impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureValue::Finite(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            MeasureValue::Infinite => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn parse_big_ratio(text: &str) -> Result<Rational, Error> {
    let malformed = || Error::MalformedMeasure {
        text: text.to_owned(),
    };
    let parse_int = |part: &str| -> Result<BigInt, Error> {
        // BigInt::from_str accepts a leading '+', underscores do not parse;
        // reject empty and internal whitespace outright.
        if part.is_empty() || part.chars().any(|c| c.is_whitespace()) {
            return Err(malformed());
        }
        BigInt::from_str(part).map_err(|_| malformed())
    };
    match text.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(text)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(malformed());
            }
            Ok(Rational::new(num, den))
        }
    }
}

impl FromStr for MeasureValue {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Error> {
        if text == "inf" {
            return Ok(MeasureValue::Infinite);
        }
        let r = parse_big_ratio(text)?;
        if r.is_negative() {
            return Err(Error::NegativeMeasure {
                text: text.to_owned(),
            });
        }
        Ok(MeasureValue::Finite(r))
    }
}
