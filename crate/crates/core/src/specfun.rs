//! Real-argument gamma-family kernels in signed-log form.
//!
//! ln Γ uses upward recurrence into the Stirling region followed by the
//! Stirling series with Bernoulli coefficients; digamma does the same with
//! its own asymptotic series. Negative arguments are handled by the same
//! upward recurrence, so no trigonometric reflection is needed.

use std::ops::{Div, Mul, Neg};

use crate::error::{Error, Result};
use crate::real::Real;

/// Arguments closer than this to a non-positive integer count as poles.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Bernoulli numbers B_2, B_4, …, B_30 as (numerator, denominator).
const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// A real number stored as `sign * exp(log_abs)`.
///
/// `sign == 0` encodes an exact zero; `log_abs` is then meaningless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog<T> {
    pub log_abs: T,
    pub sign: i8,
}

impl<T: Real> SignedLog<T> {
    pub fn zero() -> Self {
        SignedLog {
            log_abs: T::zero(),
            sign: 0,
        }
    }

    pub fn one() -> Self {
        SignedLog {
            log_abs: T::zero(),
            sign: 1,
        }
    }

    pub fn from_value(x: T) -> Self {
        if x == T::zero() {
            Self::zero()
        } else if x < T::zero() {
            SignedLog {
                log_abs: (-x).ln(),
                sign: -1,
            }
        } else {
            SignedLog {
                log_abs: x.ln(),
                sign: 1,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn value(&self) -> T {
        match self.sign {
            0 => T::zero(),
            1 => self.log_abs.exp(),
            _ => -self.log_abs.exp(),
        }
    }

    pub fn recip(self) -> Self {
        assert!(self.sign != 0, "reciprocal of exact zero");
        SignedLog {
            log_abs: -self.log_abs,
            sign: self.sign,
        }
    }
}

impl<T: Real> Mul for SignedLog<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::zero();
        }
        SignedLog {
            log_abs: self.log_abs + rhs.log_abs,
            sign: self.sign * rhs.sign,
        }
    }
}

impl<T: Real> Div for SignedLog<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl<T: Real> Neg for SignedLog<T> {
    type Output = Self;
    fn neg(self) -> Self {
        SignedLog {
            log_abs: self.log_abs,
            sign: -self.sign,
        }
    }
}

/// True when `x` lies within [`POLE_TOLERANCE`] of 0, −1, −2, …
pub fn is_gamma_pole(x: f64) -> bool {
    x <= POLE_TOLERANCE && (x - x.round()).abs() <= POLE_TOLERANCE
}

fn bernoulli<T: Real>(n: usize) -> T {
    let (num, den) = BERNOULLI[n];
    T::from_f64(num) / T::from_f64(den)
}

/// Running product that periodically moves its magnitude into a logarithm.
struct LogProduct<T> {
    prod: T,
    log_acc: T,
}

impl<T: Real> LogProduct<T> {
    fn new() -> Self {
        LogProduct {
            prod: T::one(),
            log_acc: T::zero(),
        }
    }

    fn push(&mut self, factor: T) {
        self.prod *= factor;
        let mag = self.prod.abs().to_f64();
        if !(1e-150..=1e150).contains(&mag) {
            self.log_acc += self.prod.abs().ln();
            self.prod = if self.prod < T::zero() {
                -T::one()
            } else {
                T::one()
            };
        }
    }

    fn finish(self) -> SignedLog<T> {
        if self.prod == T::zero() {
            return SignedLog::zero();
        }
        SignedLog {
            log_abs: self.log_acc + self.prod.abs().ln(),
            sign: if self.prod < T::zero() { -1 } else { 1 },
        }
    }
}

/// Stirling series for ln Γ(y), valid for `y >= T::ASYMPTOTIC_THRESHOLD`.
fn ln_gamma_stirling<T: Real>(y: T) -> T {
    let half = T::from_f64(0.5);
    let mut acc = (y - half) * y.ln() - y + T::half_ln_two_pi();
    let inv = T::one() / y;
    let inv2 = inv * inv;
    let mut power = inv;
    for n in 0..T::BERNOULLI_TERMS {
        let k = 2 * (n + 1);
        let c = bernoulli::<T>(n) / T::from_usize(k * (k - 1));
        acc += c * power;
        power *= inv2;
    }
    acc
}

/// ln|Γ(x)| together with the sign of Γ(x).
pub fn ln_gamma_signed<T: Real>(x: T) -> Result<SignedLog<T>> {
    let xf = x.to_f64();
    if !xf.is_finite() {
        return Err(Error::Domain(format!("ln_gamma of non-finite {xf}")));
    }
    if is_gamma_pole(xf) {
        return Err(Error::Pole(xf));
    }
    let threshold = T::ASYMPTOTIC_THRESHOLD;
    let mut y = x;
    let mut shift = LogProduct::new();
    while y.to_f64() < threshold {
        shift.push(y);
        y += T::one();
    }
    let shift = shift.finish();
    Ok(SignedLog {
        log_abs: ln_gamma_stirling(y) - shift.log_abs,
        sign: shift.sign,
    })
}

/// Digamma ψ(x) = d/dx ln Γ(x).
pub fn digamma<T: Real>(x: T) -> Result<T> {
    let xf = x.to_f64();
    if !xf.is_finite() {
        return Err(Error::Domain(format!("digamma of non-finite {xf}")));
    }
    if is_gamma_pole(xf) {
        return Err(Error::Pole(xf));
    }
    let mut y = x;
    let mut acc = T::zero();
    while y.to_f64() < T::ASYMPTOTIC_THRESHOLD {
        acc -= T::one() / y;
        y += T::one();
    }
    let inv = T::one() / y;
    let inv2 = inv * inv;
    acc += y.ln() - T::from_f64(0.5) * inv;
    let mut power = inv2;
    for n in 0..T::BERNOULLI_TERMS {
        let k = 2 * (n + 1);
        acc -= bernoulli::<T>(n) / T::from_usize(k) * power;
        power *= inv2;
    }
    Ok(acc)
}

/// Rising factorial (x)_n = x (x+1) ⋯ (x+n−1).
///
/// Exact zero (sign 0) when one of the factors vanishes.
pub fn pochhammer<T: Real>(x: T, n: usize) -> SignedLog<T> {
    if n == 0 {
        return SignedLog::one();
    }
    let xf = x.to_f64();
    let crosses_pole = xf <= 0.0 && (xf.round() + n as f64) > 0.0 && is_near_integer(xf, 1e-9);
    if n <= 64 || crosses_pole {
        let mut prod = LogProduct::new();
        for k in 0..n {
            let f = x + T::from_usize(k);
            if f == T::zero() {
                return SignedLog::zero();
            }
            prod.push(f);
        }
        return prod.finish();
    }
    // Γ(x+n)/Γ(x); neither argument is a pole here
    match (ln_gamma_signed(x + T::from_usize(n)), ln_gamma_signed(x)) {
        (Ok(top), Ok(bottom)) => top / bottom,
        _ => {
            let mut prod = LogProduct::new();
            for k in 0..n {
                prod.push(x + T::from_usize(k));
            }
            prod.finish()
        }
    }
}

fn is_near_integer(x: f64, tol: f64) -> bool {
    (x - x.round()).abs() <= tol
}

/// Plain-valued rising factorial for small `n`.
pub fn rising<T: Real>(x: T, n: usize) -> T {
    let mut p = T::one();
    for k in 0..n {
        p *= x + T::from_usize(k);
    }
    p
}

/// Π Γ(num_i) / Π Γ(den_j).
pub fn gamma_ratio<T: Real>(num: &[T], den: &[T]) -> Result<SignedLog<T>> {
    let mut acc = SignedLog::one();
    for &x in num {
        acc = acc * ln_gamma_signed(x)?;
    }
    for &x in den {
        acc = acc / ln_gamma_signed(x)?;
    }
    Ok(acc)
}

/// Γ(m + x) / Γ(m) for large `m` and moderate `x`, without forming either
/// gamma value. Stays accurate for `m` in the millions.
pub fn gamma_shift_ratio<T: Real>(m: T, x: T) -> Result<SignedLog<T>> {
    let threshold = T::ASYMPTOTIC_THRESHOLD;
    let top = m + x;
    if m.to_f64() < threshold || top.to_f64() < threshold {
        return gamma_ratio(&[top], &[m]);
    }
    // difference of Stirling series
    let half = T::from_f64(0.5);
    let mut acc = (top - half) * (x / m).ln_1p() + x * m.ln() - x;
    let inv_top = T::one() / top;
    let inv_m = T::one() / m;
    let (inv_top2, inv_m2) = (inv_top * inv_top, inv_m * inv_m);
    let (mut pt, mut pm) = (inv_top, inv_m);
    for n in 0..T::BERNOULLI_TERMS {
        let k = 2 * (n + 1);
        let c = bernoulli::<T>(n) / T::from_usize(k * (k - 1));
        acc += c * (pt - pm);
        pt *= inv_top2;
        pm *= inv_m2;
    }
    Ok(SignedLog {
        log_abs: acc,
        sign: 1,
    })
}
