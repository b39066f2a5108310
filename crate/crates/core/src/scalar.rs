//! Scalar abstraction shared by the numeric parts of the crate.
//!
//! The simplex engine, the Jacobi eigen-solver, pseudocodeword weights and the
//! bound formulas are written once against [`Scalar`] and instantiated with
//! exact rationals ([`Rational`]) where knife-edge comparisons matter, and with
//! `f64` (or `f32`) where speed matters more than exactness.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Ordered field used by the generic numeric code.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive
{
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    /// Zero test up to the comparison tolerance of the type (exact for rationals).
    fn near_zero(&self) -> bool;

    /// `num / den` converted into the type.
    fn ratio(num: i64, den: i64) -> Self;

    /// Whether the value is an integer (up to tolerance for floats).
    fn is_integral(&self) -> bool;

    /// Largest integer not exceeding the value.
    fn floor_value(&self) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("integer fits the scalar type")
    }

    /// Strictly positive beyond tolerance.
    fn is_pos(&self) -> bool {
        !self.near_zero() && self.is_positive()
    }

    /// Strictly negative beyond tolerance.
    fn is_neg(&self) -> bool {
        !self.near_zero() && self.is_negative()
    }

    /// `self > other` beyond tolerance.
    fn gt_tol(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_pos()
    }

    /// `self >= other` up to tolerance.
    fn ge_tol(&self, other: &Self) -> bool {
        !(other.clone() - self.clone()).is_pos()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn near_zero(&self) -> bool {
        self.abs() <= 1e-9
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn is_integral(&self) -> bool {
        (self - self.round()).abs() <= 1e-9
    }

    fn floor_value(&self) -> Self {
        // values within tolerance of an integer floor to that integer
        if self.is_integral() {
            self.round()
        } else {
            self.floor()
        }
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn near_zero(&self) -> bool {
        self.abs() <= 1e-5
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }

    fn is_integral(&self) -> bool {
        (self - self.round()).abs() <= 1e-5
    }

    fn floor_value(&self) -> Self {
        if self.is_integral() {
            self.round()
        } else {
            self.floor()
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn near_zero(&self) -> bool {
        self.is_zero()
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn floor_value(&self) -> Self {
        self.floor()
    }
}

/// Exact rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact rational `num / den`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact binary value of a float. Panics on non-finite input.
pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

/// Snaps a float to a nearby rational with denominator at most `max_den`
/// when one lies within `tol`; returns `None` otherwise.
pub fn snap_rational(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    for den in 1..=max_den {
        let num = (x * den as f64).round();
        if (num / den as f64 - x).abs() <= tol {
            return Some(frac(num as i64, den));
        }
    }
    None
}

/// Renders a rational as `"p/q"` (or `"p"` for integers).
pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, `"p"` or a decimal like `"0.75"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int, fracpart)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), fracpart);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), fracpart.len());
        let r = Rational::new(n, d);
        return Some(if negative { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

/// Rounds a float to ten decimals so reports render identically run to run.
pub fn fixed(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r = (x * 1e10).round() / 1e10;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub(crate) fn sum<T: Scalar>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |acc, x| acc + x.clone())
}

#[allow(dead_code)]
pub(crate) fn one<T: Scalar>() -> T {
    T::one()
}

/// Serde adapter rendering rationals as `"p/q"` strings.
pub mod rational_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{parse_rational, rational_string, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).ok_or_else(|| serde::de::Error::custom(format!("invalid rational {text:?}")))
    }

    /// Same, for optional values.
    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        use super::super::{parse_rational, rational_string, Rational};

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&rational_string(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| parse_rational(&t).ok_or_else(|| serde::de::Error::custom(format!("invalid rational {t:?}"))))
                .transpose()
        }
    }

    /// Same, for vectors.
    pub mod vec {
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        use super::super::{parse_rational, rational_string, Rational};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&rational_string(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|t| parse_rational(t).ok_or_else(|| serde::de::Error::custom(format!("invalid rational {t:?}"))))
                .collect()
        }
    }
}
