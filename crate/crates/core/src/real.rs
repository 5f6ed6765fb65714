//! Scalar abstraction shared by the double and double-double code paths.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::dd::DoubleDouble;

/// Real scalar used by every numerical kernel in the crate.
///
/// Implemented for `f64` and for [`DoubleDouble`]. The kernels only need
/// field arithmetic plus `exp`/`ln`; everything else (gamma, digamma,
/// Pochhammer) is built on top of these.
pub trait Real:
    Copy
    + Debug
    + Display
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    /// Unit roundoff of the type.
    const EPSILON: f64;
    /// Below this argument ln-gamma and digamma shift upwards before using
    /// their asymptotic series.
    const ASYMPTOTIC_THRESHOLD: f64;
    /// Number of Bernoulli terms used in the Stirling and digamma series.
    const BERNOULLI_TERMS: usize;

    fn from_f64(x: f64) -> Self;
    /// Leading double of the value.
    fn to_f64(self) -> f64;

    fn exp(self) -> Self;
    fn ln(self) -> Self;
    /// `ln(1 + self)`, accurate for small arguments.
    fn ln_1p(self) -> Self;

    fn pi() -> Self;
    fn euler_gamma() -> Self;
    /// `ln(2π) / 2`
    fn half_ln_two_pi() -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    fn from_i64(n: i64) -> Self {
        Self::from_f64(n as f64)
    }

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// `self^e` for `self > 0`.
    fn powf(self, e: Self) -> Self {
        (e * self.ln()).exp()
    }

    fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Real for f64 {
    const EPSILON: f64 = f64::EPSILON;
    const ASYMPTOTIC_THRESHOLD: f64 = 12.0;
    const BERNOULLI_TERMS: usize = 9;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }

    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }

    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }

    #[inline]
    fn ln_1p(self) -> Self {
        f64::ln_1p(self)
    }

    fn pi() -> Self {
        std::f64::consts::PI
    }

    fn euler_gamma() -> Self {
        0.577_215_664_901_532_9
    }

    fn half_ln_two_pi() -> Self {
        0.918_938_533_204_672_8
    }

    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }

    #[inline]
    fn powf(self, e: Self) -> Self {
        f64::powf(self, e)
    }

    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

impl Real for DoubleDouble {
    const EPSILON: f64 = 4.93e-32;
    const ASYMPTOTIC_THRESHOLD: f64 = 40.0;
    const BERNOULLI_TERMS: usize = 15;

    #[inline]
    fn from_f64(x: f64) -> Self {
        DoubleDouble::from(x)
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.hi()
    }

    fn exp(self) -> Self {
        DoubleDouble::exp(self)
    }

    fn ln(self) -> Self {
        DoubleDouble::ln(self)
    }

    fn ln_1p(self) -> Self {
        DoubleDouble::ln_1p(self)
    }

    fn pi() -> Self {
        DoubleDouble::PI
    }

    fn euler_gamma() -> Self {
        DoubleDouble::EULER_GAMMA
    }

    fn half_ln_two_pi() -> Self {
        DoubleDouble::HALF_LN_TWO_PI
    }
}
