//! The dual numeric tower: big rationals for exact paths, `f64` otherwise.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational used on every exact path.
pub type Rational = BigRational;

/// Relative tolerance under which two floating pole values are treated as one.
pub const POLE_CLUSTER_TOL: f64 = 1e-9;

/// Field operations shared by the exact and floating coordinate types.
pub trait Scalar:
    Clone + fmt::Debug + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// `true` for the rational type.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn as_f64(&self) -> f64;
    fn from_double(x: f64) -> Self;
    /// Exact rational value; fails for non-finite doubles.
    fn to_rational(&self) -> Result<Rational>;

    /// Whether two pole values should be merged into one pole of higher order.
    fn coincides(&self, other: &Self) -> bool;

    /// Whether `self` should be treated as zero relative to `scale`
    /// (pivot selection and degeneracy checks).
    fn negligible(&self, scale: f64) -> bool;

    fn from_u64(n: u64) -> Self {
        Self::from_i64(n as i64)
    }

    fn powu(&self, n: u32) -> Self {
        num_traits::pow::pow(self.clone(), n as usize)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn as_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn from_double(x: f64) -> Self {
        Rational::from_float(x).expect("finite value")
    }

    fn to_rational(&self) -> Result<Rational> {
        Ok(self.clone())
    }

    fn coincides(&self, other: &Self) -> bool {
        self == other
    }

    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn from_double(x: f64) -> Self {
        x
    }

    fn to_rational(&self) -> Result<Rational> {
        rational_from_f64(*self)
    }

    fn coincides(&self, other: &Self) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= POLE_CLUSTER_TOL * scale
    }

    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-12 * scale
    }
}

/// Nearest double to a rational, robust to huge numerators and denominators.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() && (x != 0.0 || r.is_zero()) {
            return x;
        }
    }
    // Fall back to scaling by powers of two when the naive conversion over- or underflows.
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    let (n2, d2) = if shift > 0 {
        (n.clone(), d.clone() << (shift as u64))
    } else {
        (n.clone() << ((-shift) as u64), d.clone())
    };
    let q = Rational::new(n2, d2).to_f64().unwrap_or(f64::NAN);
    q * 2f64.powi(shift as i32)
}

/// Exact conversion of a finite double to a rational.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::NotExact(format!("non-finite value {x}")))
}

/// Parses `p/q`, an integer, or a decimal such as `2.5` or `1e-3` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::parse(s, "empty number"));
    }
    match t.split_once('/') {
        Some((p, q)) => {
            let p = parse_decimal(p.trim()).ok_or_else(|| Error::parse(s, "bad numerator"))?;
            let q = parse_decimal(q.trim()).ok_or_else(|| Error::parse(s, "bad denominator"))?;
            if q.is_zero() {
                return Err(Error::parse(s, "zero denominator"));
            }
            Ok(p / q)
        }
        None => parse_decimal(t).ok_or_else(|| Error::parse(s, "not a number")),
    }
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&digits).ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = Rational::from_integer(numer);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

/// `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal string with 17 significant digits (round-trips any double).
pub fn format_decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let prec = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.prec$}"))
    } else {
        format!("{}e{}", trim_zeros(mant), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// A result that is exact when the computation allowed it.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Approx(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => rational_to_f64(r),
            Value::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => f.write_str(&format_rational(r)),
            Value::Approx(x) => f.write_str(&format_decimal(*x)),
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Exact(r)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Approx(x)
    }
}

/// Shorthand for `p/q` as a rational.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Converts an integer-valued rational to `u32` when it fits.
pub fn as_small_nonneg_int(r: &Rational) -> Option<u32> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_u32()
    } else {
        None
    }
}
