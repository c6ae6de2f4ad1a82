//! Arithmetic backends for cochain values.
//!
//! Values are angles in radians. The float backend is plain `f64`; the exact
//! backend represents `q + 2π·t` with rational `q` and `t`, which is closed
//! under every operation the discrete algorithms perform and makes
//! integrality (`q = 0`, `t ∈ ℤ`) decidable.

use std::f64::consts::TAU;
use std::fmt::Debug;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
{
    /// Whether residual checks demand exact zero.
    const EXACT: bool;

    fn zero() -> Self;
    fn from_f64(x: f64) -> Self;
    /// `2π·num/den`.
    fn from_turns(num: i64, den: i64) -> Self;
    fn scale(&self, k: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;

    /// `real · num/den · (2π)^tau_power`, if representable.
    fn from_coeff(real: f64, num: i64, den: i64, tau_power: i32) -> Option<Self>;

    /// Product, if representable.
    fn mul_checked(&self, other: &Self) -> Option<Self>;

    /// Nearest multiple of 2π and the remainder `self − 2π·n`.
    fn split_turns(&self) -> (i64, Self);

    /// Magnitude used in reports.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// `|self| ≤ tol`, or exact zero for exact backends.
    fn within(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }

    /// Distance of `self` from 2πℤ.
    fn angle_residual(&self) -> Self {
        self.split_turns().1
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_turns(num: i64, den: i64) -> Self {
        TAU * num as f64 / den as f64
    }

    fn scale(&self, k: i64) -> Self {
        self * k as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn from_coeff(real: f64, num: i64, den: i64, tau_power: i32) -> Option<Self> {
        Some(real * num as f64 / den as f64 * TAU.powi(tau_power))
    }

    fn mul_checked(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }

    fn split_turns(&self) -> (i64, Self) {
        let n = (self / TAU).round();
        (n as i64, self - n * TAU)
    }
}

/// `q + 2π·t` with rational `q`, `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact {
    pub rational: BigRational,
    pub turns: BigRational,
}

impl Exact {
    pub fn new(rational: BigRational, turns: BigRational) -> Self {
        Self { rational, turns }
    }

    pub fn integer_turns(n: i64) -> Self {
        Self::new(BigRational::zero(), BigRational::from_integer(BigInt::from(n)))
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        Exact::new(self.rational + rhs.rational, self.turns + rhs.turns)
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        Exact::new(self.rational - rhs.rational, self.turns - rhs.turns)
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact::new(-self.rational, -self.turns)
    }
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn zero() -> Self {
        Exact::new(BigRational::zero(), BigRational::zero())
    }

    /// Finite doubles are dyadic rationals, so this conversion is exact.
    fn from_f64(x: f64) -> Self {
        let q = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        Exact::new(q, BigRational::zero())
    }

    fn from_turns(num: i64, den: i64) -> Self {
        Exact::new(
            BigRational::zero(),
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    fn scale(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        Exact::new(&self.rational * &k, &self.turns * &k)
    }

    fn to_f64(&self) -> f64 {
        self.rational.to_f64().unwrap_or(f64::NAN) + TAU * self.turns.to_f64().unwrap_or(f64::NAN)
    }

    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.turns.is_zero()
    }

    fn from_coeff(real: f64, num: i64, den: i64, tau_power: i32) -> Option<Self> {
        let q = BigRational::from_float(real)? * BigRational::new(BigInt::from(num), BigInt::from(den));
        match tau_power {
            0 => Some(Exact::new(q, BigRational::zero())),
            1 => Some(Exact::new(BigRational::zero(), q)),
            _ if q.is_zero() => Some(Exact::zero()),
            _ => None,
        }
    }

    /// `(a + 2πb)(c + 2πd)` is representable unless `b·d ≠ 0`.
    fn mul_checked(&self, other: &Self) -> Option<Self> {
        if !self.turns.is_zero() && !other.turns.is_zero() {
            return None;
        }
        Some(Exact::new(
            &self.rational * &other.rational,
            &self.rational * &other.turns + &self.turns * &other.rational,
        ))
    }

    fn split_turns(&self) -> (i64, Self) {
        let n = if self.rational.is_zero() && self.turns.is_integer() {
            self.turns.to_integer().to_i64().unwrap_or(i64::MAX)
        } else {
            (self.to_f64() / TAU).round() as i64
        };
        (n, self.clone() - Exact::integer_turns(n))
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.to_f64().abs().max(f64::MIN_POSITIVE)
        }
    }
}

/// Representative of an angle in (−π, π].
pub fn reduce_angle(x: f64) -> f64 {
    let mut r = x - TAU * (x / TAU).round();
    if r <= -std::f64::consts::PI {
        r += TAU;
    }
    r
}

/// Wraparound-aware distance between two angles.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    reduce_angle(a - b).abs()
}

/// Parses `"p/q"` or `"p"` into a reduced fraction with positive denominator.
pub fn parse_fraction(s: &str) -> Option<(i64, i64)> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
        None => (s.trim().parse::<i64>().ok()?, 1),
    };
    if d == 0 {
        return None;
    }
    let r = BigRational::new(BigInt::from(n), BigInt::from(d));
    let sign = if r.is_negative() { -1 } else { 1 };
    let num = r.numer().abs().to_i64()? * sign;
    let den = r.denom().to_i64()?;
    if den.is_one() || den > 0 {
        Some((num, den))
    } else {
        None
    }
}
