//! Working-precision scalar.
//!
//! All internal arithmetic runs in double-double (about 31 significant
//! decimal digits). Public results are rounded to `f64` at the boundary.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use twofloat::TwoFloat;

/// Working-precision real number.
///
/// Addition and multiplication are delegated to `twofloat`. Division adds
/// one residual correction step, since the library quotient of two
/// double-double values is only accurate to about `f64` precision.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Real(TwoFloat);

impl Real {
    #[inline]
    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.0.lo()
    }

    #[inline]
    pub fn abs(self) -> Real {
        Real(self.0.abs())
    }

    pub fn sqrt(self) -> Real {
        if self.hi() <= 0.0 {
            return Real(self.0.sqrt());
        }
        // One Newton step from the f64 root doubles the correct digits.
        let x = Real::from(self.hi().sqrt());
        x + (self - x * x) / (x * Real::from(2.0))
    }

    pub fn powi(self, e: i32) -> Real {
        let mut base = if e < 0 { Real::from(1.0) / self } else { self };
        let mut e = e.unsigned_abs();
        let mut acc = Real::from(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn is_finite(self) -> bool {
        self.hi().is_finite() && self.lo().is_finite()
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Real) -> Real {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl From<f64> for Real {
    #[inline]
    fn from(x: f64) -> Self {
        Real(TwoFloat::from(x))
    }
}

impl From<i64> for Real {
    #[inline]
    fn from(x: i64) -> Self {
        Real(TwoFloat::from(x))
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.hi() + self.lo())
    }
}

impl Add for Real {
    type Output = Real;
    #[inline]
    fn add(self, rhs: Real) -> Real {
        Real(self.0 + rhs.0)
    }
}

impl Sub for Real {
    type Output = Real;
    #[inline]
    fn sub(self, rhs: Real) -> Real {
        Real(self.0 - rhs.0)
    }
}

impl Mul for Real {
    type Output = Real;
    #[inline]
    fn mul(self, rhs: Real) -> Real {
        Real(self.0 * rhs.0)
    }
}

impl Div for Real {
    type Output = Real;
    #[inline]
    fn div(self, rhs: Real) -> Real {
        let q = self.0 / rhs.0;
        let r = self.0 - q * rhs.0;
        Real(q + r / rhs.0.hi())
    }
}

impl Neg for Real {
    type Output = Real;
    #[inline]
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl AddAssign for Real {
    fn add_assign(&mut self, rhs: Real) {
        *self = *self + rhs;
    }
}

impl SubAssign for Real {
    fn sub_assign(&mut self, rhs: Real) {
        *self = *self - rhs;
    }
}

impl MulAssign for Real {
    fn mul_assign(&mut self, rhs: Real) {
        *self = *self * rhs;
    }
}

impl Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::from(0.0), |a, b| a + b)
    }
}

/// Decimal digits carried by [`Real`].
pub const WORKING_DIGITS: u32 = 31;

/// Relative machine epsilon of [`Real`] (2^-104).
pub const WORKING_EPS: f64 = 4.930380657631324e-32;

#[inline]
pub fn real(x: f64) -> Real {
    Real::from(x)
}

/// `p / q` rounded once in working precision.
#[inline]
pub fn ratio(p: i64, q: i64) -> Real {
    Real::from(p) / Real::from(q)
}

#[inline]
pub fn int(v: i64) -> Real {
    Real::from(v)
}

#[inline]
pub fn to_f64(x: Real) -> f64 {
    x.hi() + x.lo()
}

pub fn to_f64_vec(xs: &[Real]) -> Vec<f64> {
    xs.iter().map(|&x| to_f64(x)).collect()
}

#[inline]
pub fn zero() -> Real {
    Real::from(0.0)
}

#[inline]
pub fn one() -> Real {
    Real::from(1.0)
}

/// Largest absolute value in a slice (zero for an empty slice).
pub fn max_abs(xs: &[Real]) -> Real {
    xs.iter().fold(zero(), |m, &x| {
        let a = x.abs();
        if a > m {
            a
        } else {
            m
        }
    })
}

/// Generalized binomial coefficient `binom(x, m)` for real `x`.
pub fn binom(x: Real, m: usize) -> Real {
    let mut acc = one();
    for i in 0..m {
        acc = acc * (x - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// Serializes a working-precision value as the nearest `f64`.
pub fn serialize_real<S: serde::Serializer>(x: &Real, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_f64(to_f64(*x))
}

/// Truncates toward zero after the third decimal digit.
pub fn truncate3(x: f64) -> f64 {
    (x * 1000.0).trunc() / 1000.0
}
