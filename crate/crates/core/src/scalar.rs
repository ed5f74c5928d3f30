//! Numeric modes.
//!
//! `f64` is float mode; [`Rational`] (arbitrary precision) is exact mode.
//! Exact mode only admits integer orders `p`, because `d^p` must stay rational.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::metric::PointOrd;

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Float,
    Exact,
}

impl Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Float => f.write_str("float"),
            Mode::Exact => f.write_str("exact"),
        }
    }
}

/// Transport order `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub const ONE: Order = Order(1.0);
    pub const TWO: Order = Order(2.0);
    pub const THREE: Order = Order(3.0);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Order(p))
        } else {
            Err(Error::InvalidOrder(p))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The order as an integer, if it is one.
    pub fn integer(self) -> Option<u32> {
        if self.0.fract() == 0.0 && self.0 <= u32::MAX as f64 {
            Some(self.0 as u32)
        } else {
            None
        }
    }

    /// `x^(1/p)` for a nonnegative `x`.
    pub fn root(self, x: f64) -> f64 {
        match self.integer() {
            Some(1) => x,
            Some(2) => x.sqrt(),
            Some(3) => x.cbrt(),
            _ => x.powf(1.0 / self.0),
        }
    }
}

impl Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Field operations plus the few mode-dependent policies the library needs.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + PointOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const MODE: Mode;

    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn is_finite(&self) -> bool;
    fn powi(&self, n: u32) -> Self;
    fn floor(&self) -> Self;

    /// `self^p`; exact mode rejects non-integer orders.
    fn pow(&self, p: Order) -> Result<Self>;

    /// Slack tolerated by inequality checks.
    fn law_tolerance() -> Self;
    /// Tolerance for weight equality, normalization and metric axioms.
    fn weight_tolerance() -> Self;
    /// Tolerance for coupling marginals.
    fn marginal_tolerance() -> Self;

    /// Parses a decimal (`0.25`, `1e-3`) or a fraction (`1/4`).
    fn parse(s: &str) -> Result<Self>;
    /// Lossless text form: 17 significant digits or `num/den`.
    fn render(&self) -> String;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }
}

impl PointOrd for f64 {
    fn point_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other)
            .unwrap_or_else(|| self.total_cmp(other))
    }
}

impl PointOrd for Rational {
    fn point_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn powi(&self, n: u32) -> Self {
        match i32::try_from(n) {
            Ok(k) => f64::powi(*self, k),
            Err(_) => self.powf(n as f64),
        }
    }

    fn floor(&self) -> Self {
        f64::floor(*self)
    }

    fn pow(&self, p: Order) -> Result<Self> {
        Ok(match p.integer() {
            Some(1) => *self,
            Some(k) if k <= 64 => Scalar::powi(self, k),
            _ => self.powf(p.value()),
        })
    }

    fn law_tolerance() -> Self {
        1e-9
    }

    fn weight_tolerance() -> Self {
        1e-12
    }

    fn marginal_tolerance() -> Self {
        1e-10
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let value = if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            let d: f64 = d.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            n / d
        } else {
            s.parse().map_err(|_| Error::Parse(s.to_string()))?
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Parse(format!("non-finite number {s}")))
        }
    }

    fn render(&self) -> String {
        if *self == self.trunc() && f64::abs(*self) < 1e15 {
            format!("{}", self)
        } else {
            format!("{:.16e}", self)
        }
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Option<Self> {
        Rational::from_float(x)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Huge numerators/denominators: scale down before dividing.
            let n = self.numer().bits() as i64;
            let d = self.denom().bits() as i64;
            let shift = (n.max(d) - 1000).max(0) as usize;
            let nf = ToPrimitive::to_f64(&(self.numer() >> shift)).unwrap_or(f64::NAN);
            let df = ToPrimitive::to_f64(&(self.denom() >> shift)).unwrap_or(f64::NAN);
            nf / df
        })
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn powi(&self, n: u32) -> Self {
        num_traits::pow(self.clone(), n as usize)
    }

    fn floor(&self) -> Self {
        Rational::floor(self)
    }

    fn pow(&self, p: Order) -> Result<Self> {
        match p.integer() {
            Some(k) => Ok(Scalar::powi(self, k)),
            None => Err(Error::NonIntegerOrder(p.value())),
        }
    }

    fn law_tolerance() -> Self {
        Rational::zero()
    }

    fn weight_tolerance() -> Self {
        Rational::zero()
    }

    fn marginal_tolerance() -> Self {
        Rational::zero()
    }

    fn parse(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn render(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Exact parse of `a/b`, integers, decimals and scientific notation.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| err())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().map_err(|_| err())?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}
