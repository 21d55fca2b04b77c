//! Exact scalars and vectors.
//!
//! Everything in this crate is computed over `BigRational`. Values are kept
//! reduced by `num`, so structural equality is set equality of numbers.

use std::fmt;
use std::ops::{Deref, Index, IndexMut};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GeometryError;

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, `"-7"` or a finite decimal such as `"0.25"`.
pub fn parse_scalar(s: &str) -> Result<Scalar, GeometryError> {
    let s = s.trim();
    let bad = || GeometryError::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, fracpart)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), fracpart);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let den = num::pow(BigInt::from(10), fracpart.len());
        let value = BigRational::new(num, den);
        return Ok(if negative { -value } else { value });
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| bad())
}

/// `"p/q"`, or the bare integer when the denominator is one.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact binary-to-rational conversion. Fails on NaN and infinities.
pub fn from_f64(x: f64) -> Option<Scalar> {
    BigRational::from_float(x)
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators can overflow the direct conversion.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Serde adapter writing a scalar as a JSON string and accepting strings or integers.
pub mod serde_scalar {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let raw = ScalarRepr::deserialize(d)?;
        raw.into_scalar().map_err(serde::de::Error::custom)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Int(i64),
    Text(String),
}

impl ScalarRepr {
    fn into_scalar(self) -> Result<Scalar, GeometryError> {
        match self {
            ScalarRepr::Int(n) => Ok(int(n)),
            ScalarRepr::Text(s) => parse_scalar(&s),
        }
    }
}

/// A vector of exact rationals with a fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RVec(Vec<Scalar>);

impl RVec {
    pub fn new(entries: Vec<Scalar>) -> Self {
        RVec(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        RVec(vec![Scalar::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Scalar::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        RVec(xs.iter().map(|&x| int(x)).collect())
    }

    pub fn from_f64s(xs: &[f64]) -> Option<Self> {
        xs.iter().map(|&x| from_f64(x)).collect::<Option<Vec<_>>>().map(RVec)
    }

    pub fn parse(text: &str) -> Result<Self, GeometryError> {
        let text = text.trim().trim_start_matches('[').trim_end_matches(']');
        if text.trim().is_empty() {
            return Ok(RVec(Vec::new()));
        }
        text.split(',').map(parse_scalar).collect::<Result<_, _>>().map(RVec)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Scalar> {
        self.0
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }

    pub fn dot(&self, other: &RVec) -> Scalar {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = Scalar::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> Scalar {
        self.dot(self)
    }

    /// The l1 norm, an upper bound for the Euclidean norm.
    pub fn norm_l1(&self) -> Scalar {
        self.0.iter().fold(Scalar::zero(), |acc, x| acc + x.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &RVec) -> RVec {
        RVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RVec) -> RVec {
        RVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Scalar) -> RVec {
        RVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> RVec {
        RVec(self.0.iter().map(|a| -a).collect())
    }

    /// `self + k * other`
    pub fn axpy(&self, k: &Scalar, other: &RVec) -> RVec {
        if k.is_zero() {
            return self.clone();
        }
        RVec(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }

    pub fn concat(&self, other: &RVec) -> RVec {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        RVec(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> RVec {
        RVec(self.0[start..end].to_vec())
    }

    pub fn push(&mut self, x: Scalar) {
        self.0.push(x);
    }

    /// Positive multiple with coprime integer entries; the zero vector is returned unchanged.
    pub fn primitive(&self) -> RVec {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| num::integer::lcm(acc, x.denom().clone()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let gcd = ints
            .iter()
            .fold(BigInt::zero(), |acc, x| num::integer::gcd(acc, x.clone()));
        RVec(
            ints.into_iter()
                .map(|x| BigRational::from_integer(x / &gcd))
                .collect(),
        )
    }
}

impl Deref for RVec {
    type Target = [Scalar];
    fn deref(&self) -> &[Scalar] {
        &self.0
    }
}

impl Index<usize> for RVec {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl IndexMut<usize> for RVec {
    fn index_mut(&mut self, i: usize) -> &mut Scalar {
        &mut self.0[i]
    }
}

impl From<Vec<Scalar>> for RVec {
    fn from(v: Vec<Scalar>) -> Self {
        RVec(v)
    }
}

impl FromIterator<Scalar> for RVec {
    fn from_iter<I: IntoIterator<Item = Scalar>>(iter: I) -> Self {
        RVec(iter.into_iter().collect())
    }
}

impl fmt::Debug for RVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_scalar(x))?;
        }
        write!(f, ")")
    }
}

impl Serialize for RVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.0.iter().map(format_scalar).collect();
        strings.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<ScalarRepr>::deserialize(d)?;
        raw.into_iter()
            .map(ScalarRepr::into_scalar)
            .collect::<Result<Vec<_>, _>>()
            .map(RVec)
            .map_err(serde::de::Error::custom)
    }
}
