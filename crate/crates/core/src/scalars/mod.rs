//! Exact scalars: rationals and Gaussian rationals.
//!
//! Every value produced by the shift constructions from rational data (and a
//! Gaussian-rational weight base) stays in this field, so arithmetic here never
//! rounds. Moduli are irrational in general; they are handled either through
//! the exact squared modulus or through a certified [`Interval`].

mod interval;

pub use interval::{ceil_dyadic, floor_dyadic, nth_root_interval, Interval};
pub(crate) use interval::reduce_exponent;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Certified enclosure of a modulus `|z|`.
pub type ModulusInterval = Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed scalar `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// Which field a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An exact element of ℚ or ℚ(i).
///
/// The representation is canonical: a complex value whose imaginary part is
/// zero is always stored as [`Scalar::Real`], so structural equality is value
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Real(Rational),
    Complex { re: Rational, im: Rational },
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Real(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Real(Rational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar::Real(Rational::from_integer(BigInt::from(n)))
    }

    /// `num/den`; panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Real(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn real(r: Rational) -> Self {
        Scalar::Real(r)
    }

    pub fn complex(re: Rational, im: Rational) -> Self {
        if im.is_zero() {
            Scalar::Real(re)
        } else {
            Scalar::Complex { re, im }
        }
    }

    pub fn re(&self) -> Rational {
        match self {
            Scalar::Real(r) => r.clone(),
            Scalar::Complex { re, .. } => re.clone(),
        }
    }

    pub fn im(&self) -> Rational {
        match self {
            Scalar::Real(_) => Rational::zero(),
            Scalar::Complex { im, .. } => im.clone(),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Real(_) => Field::Real,
            Scalar::Complex { .. } => Field::Complex,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Real(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Real(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Real(r) => Some(r),
            Scalar::Complex { .. } => None,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Real(r) => Scalar::Real(r.clone()),
            Scalar::Complex { re, im } => Scalar::Complex {
                re: re.clone(),
                im: -im.clone(),
            },
        }
    }

    /// `|z|²`, exactly.
    pub fn modulus_squared(&self) -> Rational {
        match self {
            Scalar::Real(r) => r * r,
            Scalar::Complex { re, im } => re * re + im * im,
        }
    }

    /// Orders `|self|` against `|other|` using squared moduli only.
    pub fn compare_modulus(&self, other: &Scalar) -> Ordering {
        self.modulus_squared().cmp(&other.modulus_squared())
    }

    /// Certified enclosure of `|z|` with width at most `2^-precision · max(hi, 1)`.
    /// Degenerate whenever `|z|` is rational.
    pub fn modulus_interval(&self, precision: u32) -> ModulusInterval {
        match self {
            Scalar::Real(r) => Interval::point(r.abs()),
            Scalar::Complex { .. } => nth_root_interval(&self.modulus_squared(), 2, precision),
        }
    }

    /// Rational upper bound on `1/|z|`, exact when `|z|` is rational, otherwise
    /// rounded up onto the `2^-bits` grid. Panics on zero.
    pub fn reciprocal_modulus_upper(&self, bits: u32) -> Rational {
        assert!(!self.is_zero(), "reciprocal of zero");
        let mut b = bits.max(1);
        loop {
            let m = self.modulus_interval(b);
            if m.is_point() {
                return m.lo.recip();
            }
            if m.lo.is_positive() {
                return ceil_dyadic(&m.lo.recip(), b);
            }
            b *= 2;
        }
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Real(r) => {
                if r.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Real(r.recip()))
                }
            }
            Scalar::Complex { re, im } => {
                let d = re * re + im * im;
                Ok(Scalar::complex(re / &d, -(im / &d)))
            }
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &rhs.inverse()?)
    }

    /// Applies one of the four field operations.
    pub fn field_op(&self, rhs: &Scalar, op: FieldOp) -> Result<Scalar, ScalarError> {
        match op {
            FieldOp::Add => Ok(self + rhs),
            FieldOp::Sub => Ok(self - rhs),
            FieldOp::Mul => Ok(self * rhs),
            FieldOp::Div => self.checked_div(rhs),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        if let Scalar::Real(r) = self {
            if let Ok(e) = i32::try_from(exp) {
                return Scalar::Real(num_traits::Pow::pow(r, e));
            }
        }
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        match self {
            Scalar::Real(x) => Scalar::Real(x * r),
            Scalar::Complex { re, im } => Scalar::complex(re * r, im * r),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Real(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Real(a), Scalar::Real(b)) => Scalar::Real(a + b),
            _ => Scalar::complex(self.re() + rhs.re(), self.im() + rhs.im()),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Real(a), Scalar::Real(b)) => Scalar::Real(a - b),
            _ => Scalar::complex(self.re() - rhs.re(), self.im() - rhs.im()),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Real(a), Scalar::Real(b)) => Scalar::Real(a * b),
            (Scalar::Real(a), Scalar::Complex { re, im })
            | (Scalar::Complex { re, im }, Scalar::Real(a)) => Scalar::complex(a * re, a * im),
            (Scalar::Complex { re: a, im: b }, Scalar::Complex { re: c, im: d }) => {
                Scalar::complex(a * c - b * d, a * d + b * c)
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Real(r) => Scalar::Real(-r),
            Scalar::Complex { re, im } => Scalar::Complex {
                re: -re,
                im: -im,
            },
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    /// `p/q` for rationals, `a+b*i` / `a-b*i` for Gaussian rationals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Real(r) => write!(f, "{r}"),
            Scalar::Complex { re, im } => {
                let sign = if im.is_negative() { '-' } else { '+' };
                write!(f, "{re}{sign}{}*i", im.abs())
            }
        }
    }
}

fn parse_error(input: &str, reason: impl Into<String>) -> ScalarError {
    ScalarError::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// Parses `p`, `-p/q` style rationals. Decimal points are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(parse_error(s, "empty"));
    }
    if t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(parse_error(s, "decimal notation is not accepted, use p/q"));
    }
    let int = |part: &str| -> Result<BigInt, ScalarError> {
        let part = part.trim();
        let digits = part.strip_prefix(['+', '-']).unwrap_or(part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_error(s, format!("`{part}` is not an integer")));
        }
        part.parse::<BigInt>()
            .map_err(|e| parse_error(s, e.to_string()))
    };
    match t.split_once('/') {
        None => Ok(Rational::from_integer(int(t)?)),
        Some((n, d)) => {
            let d = d.trim();
            if d.starts_with(['+', '-']) {
                return Err(parse_error(s, "denominator must be unsigned"));
            }
            let den = int(d)?;
            if den.is_zero() {
                return Err(parse_error(s, "zero denominator"));
            }
            Ok(Rational::new(int(n)?, den))
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a [`Rational`] as its exact `p/q` string.
pub mod rational_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    /// Accepts `p`, `p/q`, `a/b+c/d*i`, `a-c*i`, `c*i`, `i`, `-i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(parse_error(s, "empty"));
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Scalar::Real(parse_rational(&t).map_err(|_| {
                parse_error(s, "expected p, p/q, or a+b*i")
            })?));
        };
        let starred = body.ends_with('*');
        let body = body.strip_suffix('*').unwrap_or(body);
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (re_str, im_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im_str {
            "" | "+" | "-" if starred => return Err(parse_error(s, "missing imaginary coefficient")),
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other).map_err(|_| parse_error(s, "bad imaginary part"))?,
        };
        let re = parse_rational(re_str).map_err(|_| parse_error(s, "bad real part"))?;
        Ok(Scalar::complex(re, im))
    }
}
