//! Exact rational numbers and extended exponents.
//!
//! Every numeric parameter in this crate is a [`Rat`]: an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. There is no
//! floating-point fallback anywhere; comparisons against sector thresholds
//! are decided exactly.
//!
//! Integrability and sum exponents live in `(0, inf]` and are stored as
//! their reciprocals ([`ExtExp`]), so `p = inf` is the ordinary rational `0`
//! and every threshold formula (they are all written in `n/p`) stays affine
//! in the stored data.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Exact rational number in lowest terms, denominator > 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`, reduced. Errors when `den == 0`.
    pub fn new(num: i64, den: i64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rat(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Multiplicative inverse; errors on zero.
    pub fn recip(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rat(self.0.recip()))
    }

    /// Positive part `max(x, 0)`.
    pub fn pos_part(&self) -> Self {
        if self.is_positive() {
            self.clone()
        } else {
            Rat::zero()
        }
    }

    /// Negative part `max(-x, 0)`.
    pub fn neg_part(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            Rat::zero()
        }
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Nearest integer, ties rounded up. Used for pixel mapping only.
    pub fn round_half_up(&self) -> BigInt {
        (&self.0 + BigRational::new(BigInt::from(1), BigInt::from(2)))
            .floor()
            .to_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::int(n)
    }
}

impl From<u32> for Rat {
    fn from(n: u32) -> Self {
        Rat::int(i64::from(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Error> {
        let text = text.trim();
        let bad = || Error::ParseRational(text.to_string());
        match text.split_once('/') {
            Some((num, den)) => {
                let num: BigInt = num.trim().parse().map_err(|_| bad())?;
                let den: BigInt = den.trim().parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                Ok(Rat(BigRational::new(num, den)))
            }
            None => {
                let num: BigInt = text.parse().map_err(|_| bad())?;
                Ok(Rat(BigRational::from_integer(num)))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}

/// Exponent in `(0, inf]`, stored as the reciprocal `1/p` (with `1/inf = 0`).
///
/// The derived ordering is the *exponent value* ordering, so `inf` is the
/// greatest element: `ExtExp::from_value(2) < ExtExp::infinity()`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtExp {
    recip: Rat,
}

impl ExtExp {
    pub fn infinity() -> Self {
        ExtExp { recip: Rat::zero() }
    }

    /// Build from the exponent value `p > 0`.
    pub fn from_value(p: Rat) -> Result<Self, Error> {
        if !p.is_positive() {
            return Err(Error::NonPositiveExponent);
        }
        Ok(ExtExp { recip: p.recip()? })
    }

    /// Build from the reciprocal `1/p >= 0` (`0` encodes `p = inf`).
    pub fn from_recip(recip: Rat) -> Result<Self, Error> {
        if recip.is_negative() {
            return Err(Error::NegativeReciprocal);
        }
        Ok(ExtExp { recip })
    }

    pub fn int(p: i64) -> Result<Self, Error> {
        Self::from_value(Rat::int(p))
    }

    pub fn recip(&self) -> &Rat {
        &self.recip
    }

    pub fn is_infinite(&self) -> bool {
        self.recip.is_zero()
    }

    /// The exponent value, `None` when infinite.
    pub fn value(&self) -> Option<Rat> {
        if self.is_infinite() {
            None
        } else {
            Some(self.recip.recip().expect("nonzero reciprocal"))
        }
    }
}

impl PartialOrd for ExtExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtExp {
    fn cmp(&self, other: &Self) -> Ordering {
        // Larger exponent = smaller reciprocal.
        other.recip.cmp(&self.recip)
    }
}

impl fmt::Display for ExtExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => write!(f, "inf"),
            Some(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for ExtExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for ExtExp {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Error> {
        let text = text.trim();
        if text == "inf" || text == "∞" {
            return Ok(ExtExp::infinity());
        }
        ExtExp::from_value(text.parse()?)
    }
}

impl Serialize for ExtExp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtExp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}
