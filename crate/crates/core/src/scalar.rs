//! Scalar fields used by the linear algebra kernels.
//!
//! Everything that feeds lattice decisions runs over an exact field
//! ([`Rational`] or [`GaussRational`]); the floating point instances exist so
//! the same kernels can be exercised numerically.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// A commutative field with an involution, the scalar type of every matrix
/// kernel in the crate.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// The fixed field of the involution.
    type Real: RealField;

    fn conj(&self) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn from_real(r: Self::Real) -> Self;
    fn from_i64(n: i64) -> Self;

    /// The imaginary unit, when the field contains one.
    fn imag_unit() -> Option<Self>;

    /// Pivot test for elimination. Exact fields use `is_zero`.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn abs_sq(&self) -> Self::Real {
        let (r, i) = (self.re(), self.im());
        r.clone() * r + i.clone() * i
    }

    fn is_real(&self) -> bool {
        self.im().is_negligible()
    }
}

/// An ordered field that is its own real part.
pub trait RealField: Field<Real = Self> + PartialOrd {}

impl<T: Field<Real = T> + PartialOrd> RealField for T {}

/// Exact fields whose real part is the rationals. Spectral calculus and norm
/// enclosures are only offered over these.
pub trait ExactField: Field<Real = Rational> {}

impl<T: Field<Real = Rational>> ExactField for T {}

pub type Rational = BigRational;

impl Field for BigRational {
    type Real = BigRational;

    fn conj(&self) -> Self {
        self.clone()
    }
    fn re(&self) -> Self {
        self.clone()
    }
    fn im(&self) -> Self {
        BigRational::zero()
    }
    fn from_real(r: Self) -> Self {
        r
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn imag_unit() -> Option<Self> {
        None
    }
}

impl Field for f64 {
    type Real = f64;

    fn conj(&self) -> Self {
        *self
    }
    fn re(&self) -> Self {
        *self
    }
    fn im(&self) -> Self {
        0.0
    }
    fn from_real(r: Self) -> Self {
        r
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn imag_unit() -> Option<Self> {
        None
    }
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-10
    }
}

/// `re + im·i` over a real field `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gaussian<T> {
    pub re: T,
    pub im: T,
}

pub type GaussRational = Gaussian<Rational>;
pub type GaussF64 = Gaussian<f64>;

impl<T> Gaussian<T> {
    pub fn new(re: T, im: T) -> Self {
        Gaussian { re, im }
    }
}

impl<T: RealField> Gaussian<T> {
    pub fn real(re: T) -> Self {
        Gaussian { re, im: T::zero() }
    }
    pub fn i() -> Self {
        Gaussian { re: T::zero(), im: T::one() }
    }
}

impl<T: RealField> Zero for Gaussian<T> {
    fn zero() -> Self {
        Gaussian { re: T::zero(), im: T::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<T: RealField> One for Gaussian<T> {
    fn one() -> Self {
        Gaussian { re: T::one(), im: T::zero() }
    }
}

impl<T: RealField> Add for Gaussian<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Gaussian { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<T: RealField> Sub for Gaussian<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Gaussian { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<T: RealField> Neg for Gaussian<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Gaussian { re: -self.re, im: -self.im }
    }
}

impl<T: RealField> Mul for Gaussian<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone();
        let im = self.re * o.im + self.im * o.re;
        Gaussian { re, im }
    }
}

impl<T: RealField> Div for Gaussian<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = o.re.clone() * o.re.clone() + o.im.clone() * o.im.clone();
        let n = self * o.conj();
        Gaussian { re: n.re / d.clone(), im: n.im / d }
    }
}

impl<T: RealField> Field for Gaussian<T> {
    type Real = T;

    fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -self.im.clone() }
    }
    fn re(&self) -> T {
        self.re.clone()
    }
    fn im(&self) -> T {
        self.im.clone()
    }
    fn from_real(r: T) -> Self {
        Gaussian::real(r)
    }
    fn from_i64(n: i64) -> Self {
        Gaussian::real(T::from_i64(n))
    }
    fn imag_unit() -> Option<Self> {
        Some(Gaussian::i())
    }
    fn is_negligible(&self) -> bool {
        self.re.is_negligible() && self.im.is_negligible()
    }
}

/// Rational from a small numerator/denominator pair.
pub fn q(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Rational {
    q(n, 1)
}

/// Gaussian rational `a/b + (c/d)i`.
pub fn gq(re: Rational, im: Rational) -> GaussRational {
    Gaussian::new(re, im)
}

pub fn gi(n: i64) -> GaussRational {
    Gaussian::real(qi(n))
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Structural(format!("invalid rational literal {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Best-effort conversion for human-readable reports.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl FromStr for GaussRational {
    type Err = Error;

    /// Accepts `p/q`, `r/si`, `p/q+r/si`, `i`, `-i`, `3-i`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Structural(format!("invalid Gaussian rational literal {s:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Gaussian::real(parse_rational(&t)?));
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .next_back();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let im = match im_part {
            "" | "+" => qi(1),
            "-" => qi(-1),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        let re = if re_part.is_empty() { qi(0) } else { parse_rational(re_part)? };
        if t.contains("ii") {
            return Err(bad());
        }
        Ok(Gaussian::new(re, im))
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_str = |im: &Rational| -> String {
            if im.is_one() {
                "i".into()
            } else if (-im).is_one() {
                "-i".into()
            } else {
                format!("{}i", format_rational(im))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) => write!(f, "{}", im_str(&self.im)),
            (false, false) => {
                let ims = im_str(&self.im);
                let sep = if self.im.is_negative() { "" } else { "+" };
                write!(f, "{}{}{}", format_rational(&self.re), sep, ims)
            }
        }
    }
}

impl Serialize for GaussRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing rationals as strings.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
