//! Double-double arithmetic: an unevaluated sum `hi + lo` of two doubles
//! with `|lo| <= ulp(hi) / 2`, giving roughly 32 significant digits.
//!
//! Used to measure asymptotic residuals that fall below the resolution of a
//! single double (residuals of order 1e-18 on sums of order one).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Clone, Copy, Debug, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Multiplies by `2^k` without rounding (barring underflow).
fn ldexp(x: f64, k: i32) -> f64 {
    let mut x = x;
    let mut k = k;
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
    }
    x * 2f64.powi(k)
}

impl DoubleDouble {
    pub const PI: DoubleDouble = DoubleDouble {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };
    pub const LN_2: DoubleDouble = DoubleDouble {
        hi: std::f64::consts::LN_2,
        lo: 2.3190468138462996e-17,
    };
    pub const EULER_GAMMA: DoubleDouble = DoubleDouble {
        hi: 0.5772156649015329,
        lo: -4.942915152430645e-18,
    };
    pub const HALF_LN_TWO_PI: DoubleDouble = DoubleDouble {
        hi: 0.9189385332046728,
        lo: -3.8782941580672414e-17,
    };

    /// Builds a normalized value from two arbitrary doubles.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    fn scale_pow2(self, k: i32) -> Self {
        DoubleDouble {
            hi: ldexp(self.hi, k),
            lo: ldexp(self.lo, k),
        }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.8 {
            return DoubleDouble::from(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return DoubleDouble::from(0.0);
        }
        if self.hi == 0.0 {
            return DoubleDouble::from(1.0);
        }
        let k = (self.hi / Self::LN_2.hi).round();
        let r = self - Self::LN_2.mul_f64(k);
        // exp(r) = (exp(r / 1024))^1024, kept in expm1 form while squaring
        let r = r.scale_pow2(-10);
        let mut term = r;
        let mut sum = r;
        let mut n = 1.0;
        loop {
            n += 1.0;
            term = term * r / DoubleDouble::from(n);
            sum += term;
            if term.hi.abs() < 1e-36 * sum.hi.abs().max(1e-300) || n > 30.0 {
                break;
            }
        }
        for _ in 0..10 {
            sum = sum.scale_pow2(1) + sum * sum;
        }
        (sum + DoubleDouble::from(1.0)).scale_pow2(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 || self.hi.is_nan() {
            return DoubleDouble::from(f64::NAN);
        }
        if self.hi.is_infinite() {
            return self;
        }
        let one = DoubleDouble::from(1.0);
        let mut y = DoubleDouble::from(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - one;
        }
        y
    }

    /// `ln(1 + self)` without cancellation for small `self`.
    pub fn ln_1p(self) -> Self {
        if self.hi.abs() > 0.125 {
            return (self + DoubleDouble::from(1.0)).ln();
        }
        // ln(1+u) = 2 atanh(u / (2 + u))
        let z = self / (self + DoubleDouble::from(2.0));
        let z2 = z * z;
        let mut power = z;
        let mut sum = z;
        let mut k = 1.0;
        loop {
            k += 2.0;
            power *= z2;
            let term = power / DoubleDouble::from(k);
            sum += term;
            if term.hi.abs() < 1e-36 * sum.hi.abs().max(1e-300) || k > 200.0 {
                break;
            }
        }
        sum.scale_pow2(1)
    }
}

impl From<f64> for DoubleDouble {
    #[inline]
    fn from(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.hi, f)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (hi, lo) = quick_two_sum(s, e);
        DoubleDouble { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from(q3)
    }
}

macro_rules! assign_op {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            #[inline]
            fn $method(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    };
}

assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(hi: f64, lo: f64) -> DoubleDouble {
        DoubleDouble::new(hi, lo)
    }

    fn rel(a: DoubleDouble, b: DoubleDouble) -> f64 {
        ((a - b) / b).hi().abs()
    }

    #[test]
    fn one_third_times_three() {
        let third = DoubleDouble::from(1.0) / DoubleDouble::from(3.0);
        let back = third * DoubleDouble::from(3.0);
        assert!((back - DoubleDouble::from(1.0)).hi().abs() < 1e-31);
    }

    // reference values: mpmath at 50 digits, split into hi + lo
    #[test]
    fn exp_matches_reference() {
        let e = DoubleDouble::from(1.0).exp();
        assert!(rel(e, dd(2.718281828459045, 1.4456468917292502e-16)) < 1e-31);
        let x = DoubleDouble::from(-7.25).exp();
        assert!(rel(x, dd(0.000710174388842549, 3.546078199295509e-20)) < 1e-30);
    }

    #[test]
    fn ln_matches_reference() {
        let l = DoubleDouble::from(10.0).ln();
        assert!(rel(l, dd(2.302585092994046, -2.1707562233822494e-16)) < 1e-31);
        let l2 = DoubleDouble::from(2.0).ln();
        assert!(rel(l2, DoubleDouble::LN_2) < 1e-31);
    }

    #[test]
    fn ln_1p_small_argument() {
        let u = DoubleDouble::from(1e-5);
        let v = u.ln_1p();
        let reference = dd(9.999950000333332e-6, -2.3868637284493416e-22);
        assert!(rel(v, reference) < 1e-30);
    }

    #[test]
    fn ordering_uses_low_word() {
        let a = dd(1.0, 1e-20);
        let b = dd(1.0, 2e-20);
        assert!(a < b);
        assert!(b > a);
    }
}
