//! Field elements used for structure constants.
//!
//! Two fields are supported: exact rationals ([`Rational`]) and `f64`. The
//! exact path is what the structure computations rely on; the float path
//! exists for arbitrary real parameters and for the dynamics.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Tolerance used by float comparisons that stand in for exact equality
/// (span membership, rank, ideal tests).
pub const FLOAT_ZERO_TOL: f64 = 1e-10;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when comparisons on this type are exact.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Converts a float. Rationals take the exact binary value.
    fn from_f64(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// Equality used by the algebra routines: exact for rationals, within
    /// `tol` (absolute) for floats.
    fn near(&self, other: &Self, tol: f64) -> bool;

    fn is_negative(&self) -> bool;

    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    /// Zero test for linear algebra; uses [`FLOAT_ZERO_TOL`] for floats.
    fn is_negligible(&self) -> bool {
        self.near(&Self::zero(), FLOAT_ZERO_TOL)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn near(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn near(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }
}

/// Parses a decimal literal such as `"0.18"`, `"-3"`, `"1.5e-2"` or a
/// fraction `"9/50"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a decimal or fraction: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
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
    let all_digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(&all_digits).map_err(|_| bad())?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Converts a float to the rational with the same shortest decimal
/// representation (`0.18` becomes `9/50`, not its binary expansion).
pub fn rational_from_decimal_f64(v: f64) -> Result<Rational, Error> {
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite number {v}")));
    }
    parse_rational(&format!("{v:?}"))
}
