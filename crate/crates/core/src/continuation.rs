//! Coefficients of the continuation formulas around z = 1.
//!
//! Finite coefficients (g_n, e_n, q_n, h_n, v_n) are short sums over A_k;
//! the constants g_0, d_0, l_0 and u_0 contain infinite sums over k whose
//! terms decay only algebraically, like a combination of `k^{-1-a_j}` for
//! `j >= 3`. Those are summed directly while that converges quickly enough
//! and otherwise extrapolated from partial sums on a geometric grid with the
//! known decay exponents (see [`crate::extrapolate`]).

use serde::{Deserialize, Serialize};

use crate::coefficients::{AkCache, AkTable, Compensated};
use crate::error::{Error, Result};
use crate::extrapolate::{basis_for, extrapolate};
use crate::params::{SeriesParams, DEFAULT_EPS_INT};
use crate::real::Real;
use crate::specfun::{digamma, gamma_ratio, ln_gamma_signed, rising};

/// Truncation control for the infinite sums over k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailControl {
    pub rel_tol: f64,
    pub k_max: usize,
    /// Consecutive terms that must lie below `rel_tol · |sum|` before plain
    /// truncation is accepted.
    pub min_decay_window: usize,
    /// Extrapolate the partial sums when plain truncation is too slow.
    pub accelerate: bool,
}

impl Default for TailControl {
    fn default() -> Self {
        TailControl {
            rel_tol: 1e-14,
            k_max: 200_000,
            min_decay_window: 8,
            accelerate: true,
        }
    }
}

impl TailControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidParams(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if self.k_max < 1 {
            return Err(Error::InvalidParams("k_max must be at least 1".into()));
        }
        Ok(())
    }
}

/// Value of an infinite sum together with its estimated truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue<T> {
    pub value: T,
    pub tail_bound: f64,
    /// Largest k included.
    pub terms: usize,
    pub extrapolated: bool,
}

/// First table length tried for the infinite sums.
const START_K: usize = 256;
/// Smallest K used as an extrapolation node.
const MIN_NODE_K: usize = 16;
/// Most extrapolation nodes used at once.
const MAX_NODES: usize = 12;
/// Budget for `(p - 2) K²` when building tables for p >= 3, in double
/// precision; double-double arithmetic is roughly 20 times slower and gets
/// a quarter of it.
const CONVOLUTION_BUDGET: f64 = 4.4e9;

/// Weights `w_k`, `k >= start`, of a sum `Σ w_k A_{k+shift}/(k+shift)!`,
/// generated by `w_{k+1} = w_k · ratio(k)`.
struct Weights<T, F> {
    start: usize,
    first: T,
    ratio: F,
    shift: usize,
}

fn table_limit<T: Real>(p: usize, k_max: usize) -> usize {
    if p <= 2 {
        return k_max;
    }
    let budget = if T::EPSILON < 1e-20 {
        CONVOLUTION_BUDGET / 4.0
    } else {
        CONVOLUTION_BUDGET
    };
    let cap = (budget / (p - 2) as f64).sqrt() as usize;
    // nodes sit at powers of two, so a longer table would be wasted
    let cap = 1usize << (usize::BITS - 1 - cap.leading_zeros());
    k_max.min(cap.max(START_K))
}

fn sum_k_series<T: Real, F: Fn(usize) -> T>(
    name: &'static str,
    params: &SeriesParams,
    cache: &AkCache<T>,
    ctl: &TailControl,
    weights: Weights<T, F>,
) -> Result<SeriesValue<T>> {
    params.check_convergence()?;
    ctl.validate()?;
    let exponents = params.tail_exponents();
    let delta = exponents.iter().cloned().fold(f64::INFINITY, f64::min);
    let limit = table_limit::<T>(params.p(), ctl.k_max).max(weights.start + 1);
    let mut k_top = START_K.min(limit);
    let mut best: Option<SeriesValue<T>> = None;
    let threshold = |v: T| 100.0 * ctl.rel_tol * v.abs().to_f64();
    loop {
        let table = cache.get(params, k_top + weights.shift);
        let mut acc = Compensated::new();
        let mut w = weights.first;
        let mut nodes_k = Vec::new();
        let mut nodes_s = Vec::new();
        let mut window_max = 0.0f64;
        let window_start = k_top.saturating_sub(ctl.min_decay_window.max(1) - 1);
        let mut last_term = T::zero();
        for k in weights.start..=k_top {
            let term = w * table.scaled(k + weights.shift);
            acc.add(term);
            if k >= window_start {
                window_max = window_max.max(term.abs().to_f64());
            }
            last_term = term;
            if k >= MIN_NODE_K && k.is_power_of_two() {
                nodes_k.push(k as f64);
                nodes_s.push(acc.value());
            }
            w *= (weights.ratio)(k);
        }
        let total = acc.value();
        if !total.to_f64().is_finite() {
            return Err(Error::Tail {
                series: name,
                value: total.to_f64(),
                bound: f64::INFINITY,
                terms: k_top,
            });
        }
        // plain truncation
        let bound = if exponents.is_empty() || window_max == 0.0 {
            0.0
        } else {
            last_term.abs().to_f64() * k_top as f64 / delta
        };
        let small_window = window_max <= ctl.rel_tol * total.abs().to_f64();
        if (small_window || window_max == 0.0) && bound <= threshold(total) {
            return Ok(SeriesValue {
                value: total,
                tail_bound: bound,
                terms: k_top,
                extrapolated: false,
            });
        }
        if best.is_none() || best.map(|b| b.tail_bound > bound).unwrap_or(false) {
            best = Some(SeriesValue {
                value: total,
                tail_bound: bound,
                terms: k_top,
                extrapolated: false,
            });
        }
        if ctl.accelerate && nodes_k.len() >= 3 {
            if let Some(est) = extrapolated_estimate(&nodes_k, &nodes_s, &exponents) {
                let candidate = SeriesValue {
                    value: est.0,
                    tail_bound: est.1,
                    terms: k_top,
                    extrapolated: true,
                };
                if est.1 <= threshold(est.0) {
                    return Ok(candidate);
                }
                if best.map(|b| b.tail_bound > est.1).unwrap_or(true) {
                    best = Some(candidate);
                }
            }
        }
        if k_top >= limit {
            break;
        }
        k_top = (2 * k_top).min(limit);
    }
    let b = best.expect("at least one pass");
    Err(Error::Tail {
        series: name,
        value: b.value.to_f64(),
        bound: b.tail_bound,
        terms: b.terms,
    })
}

/// Extrapolated limit and error estimate from the nodes with the largest K.
///
/// Estimates E_n use the n largest nodes. The error of E_n is taken as the
/// larger of |E_n − E_{n−1}| and |E_n − E_{n−2}| (two neighbours, since
/// a log-paired basis function can leave consecutive estimates
/// accidentally close); the n with the smallest such error wins.
fn extrapolated_estimate<T: Real>(ks: &[f64], sums: &[T], exponents: &[f64]) -> Option<(T, f64)> {
    let total = ks.len().min(MAX_NODES);
    if total < 3 {
        return None;
    }
    let estimate = |n: usize| {
        let ks = &ks[ks.len() - n..];
        let sums = &sums[sums.len() - n..];
        extrapolate(ks, sums, &basis_for(exponents, n - 1))
    };
    let values: Vec<T> = (1..=total).map(estimate).collect();
    let mut best: Option<(T, f64)> = None;
    for n in 3..=total {
        let e = values[n - 1];
        let err = (e - values[n - 2])
            .abs()
            .to_f64()
            .max((e - values[n - 3]).abs().to_f64())
            // agreeing estimates say nothing below the rounding level
            .max(16.0 * T::EPSILON * e.abs().to_f64());
        if best.map(|b| err < b.1).unwrap_or(true) {
            best = Some((e, err));
        }
    }
    best
}

fn ensure_s(params: &SeriesParams, target: f64, what: &str) -> Result<()> {
    let s = params.s_exponent();
    if (s - target).abs() > DEFAULT_EPS_INT {
        return Err(Error::Domain(format!(
            "{what} needs s = {target}, but s = {s}"
        )));
    }
    Ok(())
}

fn a12<T: Real>(params: &SeriesParams) -> (T, T) {
    (T::from_f64(params.a()[0]), T::from_f64(params.a()[1]))
}

fn s_of<T: Real>(params: &SeriesParams) -> T {
    let sb = params.b().iter().fold(T::zero(), |s, &x| s + T::from_f64(x));
    let sa = params.a().iter().fold(T::zero(), |s, &x| s + T::from_f64(x));
    sb - sa
}

/// `Σ_{k=0}^n (−n)_k (x1+k)_{n−k} (x2+k)_{n−k} A_k`, which equals
/// `(x1)_n (x2)_n Σ_k (−n)_k / ((x1)_k (x2)_k) A_k` without dividing by
/// Pochhammer symbols that may vanish.
pub fn block<T: Real>(table: &AkTable<T>, x1: T, x2: T, n: usize) -> T {
    let mut acc = Compensated::new();
    let mut neg_n = T::one();
    for k in 0..=n {
        let ak = table.plain(k);
        if ak != T::zero() {
            let xk = T::from_usize(k);
            acc.add(neg_n * rising(x1 + xk, n - k) * rising(x2 + xk, n - k) * ak);
        }
        neg_n *= T::from_usize(k) - T::from_usize(n);
    }
    acc.value()
}

fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |f, i| f * T::from_usize(i))
}

fn sign_pow(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// g_0 evaluated at exponent `s`: `Γ(a1)Γ(a2)Γ(s)/(Γ(a1+s)Γ(a2+s)) ·
/// Σ_{k>=0} (s)_k/((a1+s)_k (a2+s)_k) A_k`.
fn g0_at<T: Real>(
    name: &'static str,
    params: &SeriesParams,
    s: T,
    ctl: &TailControl,
    cache: &AkCache<T>,
) -> Result<SeriesValue<T>> {
    let (a1, a2) = a12::<T>(params);
    let pre = gamma_ratio(&[a1, a2, s], &[a1 + s, a2 + s])?;
    let (x1, x2) = (a1 + s, a2 + s);
    let sum = sum_k_series(
        name,
        params,
        cache,
        ctl,
        Weights {
            start: 0,
            first: T::one(),
            ratio: move |k: usize| {
                let kf = T::from_usize(k);
                (s + kf) * (kf + T::one()) / ((x1 + kf) * (x2 + kf))
            },
            shift: 0,
        },
    )?;
    let scale = pre.value();
    Ok(SeriesValue {
        value: scale * sum.value,
        tail_bound: scale.abs().to_f64() * sum.tail_bound,
        ..sum
    })
}

/// g_0(0), the constant of the non-integer expansions.
pub fn g0_const<T: Real>(
    params: &SeriesParams,
    ctl: &TailControl,
    cache: &AkCache<T>,
) -> Result<SeriesValue<T>> {
    let s = params.s_exponent();
    if s <= DEFAULT_EPS_INT && (s - s.round()).abs() <= DEFAULT_EPS_INT {
        return Err(Error::Pole(s));
    }
    g0_at("g0", params, s_of::<T>(params), ctl, cache)
}

/// l_0 = g_0 at integer s = t.
pub fn l0_const<T: Real>(
    params: &SeriesParams,
    t: u32,
    ctl: &TailControl,
    cache: &AkCache<T>,
) -> Result<SeriesValue<T>> {
    if t == 0 {
        return Err(Error::Domain("l0 needs t >= 1".into()));
    }
    ensure_s(params, t as f64, "l0")?;
    g0_at("l0", params, T::from_f64(t as f64), ctl, cache)
}

/// Coefficient g_n(s) of the singular part `(1−z)^{s+n}`.
pub fn g_singular<T: Real>(params: &SeriesParams, n: usize, cache: &AkCache<T>) -> Result<T> {
    let sf = params.s_exponent();
    if (sf - sf.round()).abs() <= DEFAULT_EPS_INT {
        return Err(Error::Pole(-sf - n as f64));
    }
    let s = s_of::<T>(params);
    let (a1, a2) = a12::<T>(params);
    let table = cache.get(params, n);
    let gamma = ln_gamma_signed(-s - T::from_usize(n))?.value();
    Ok(T::from_f64(sign_pow(n)) * gamma / factorial::<T>(n) * block(&table, a1 + s, a2 + s, n))
}

/// e_n of the zero-balanced continuation.
pub fn e_coeff<T: Real>(params: &SeriesParams, n: usize, cache: &AkCache<T>) -> Result<T> {
    ensure_s(params, 0.0, "e_n")?;
    let (a1, a2) = a12::<T>(params);
    let table = cache.get(params, n);
    let f = factorial::<T>(n);
    Ok(-block(&table, a1, a2, n) / (f * f))
}

/// d_0 of the zero-balanced continuation.
pub fn d0_const<T: Real>(
    params: &SeriesParams,
    ctl: &TailControl,
    cache: &AkCache<T>,
) -> Result<SeriesValue<T>> {
    ensure_s(params, 0.0, "d0")?;
    let (a1, a2) = a12::<T>(params);
    let psi = T::from_f64(2.0) * digamma(T::one())? - digamma(a1)? - digamma(a2)?;
    let sum = log_weighted_sum("d0", params, 0, ctl, cache)?;
    Ok(SeriesValue {
        value: psi + sum.value,
        ..sum
    })
}

/// `Σ_{k>=1} Γ(k)/((a1)_k (a2)_k) A_{k+shift}`.
fn log_weighted_sum<T: Real>(
    name: &'static str,
    params: &SeriesParams,
    shift: usize,
    ctl: &TailControl,
    cache: &AkCache<T>,
) -> Result<SeriesValue<T>> {
    let (a1, a2) = a12::<T>(params);
    // w_k = Γ(k) (k+shift)! / ((a1)_k (a2)_k)
    let first = factorial::<T>(1 + shift) / (a1 * a2);
    sum_k_series(
        name,
        params,
        cache,
        ctl,
        Weights {
            start: 1,
            first,
            ratio: move |k: usize| {
                let kf = T::from_usize(k);
                kf * T::from_usize(k + shift + 1) / ((a1 + kf) * (a2 + kf))
            },
            shift,
        },
    )
}

/// q_n for s = t.
pub fn q_coeff<T: Real>(params: &SeriesParams, t: u32, n: usize, cache: &AkCache<T>) -> Result<T> {
    if t == 0 {
        return Err(Error::Domain("q_n needs t >= 1".into()));
    }
    ensure_s(params, t as f64, "q_n")?;
    let (a1, a2) = a12::<T>(params);
    let tt = T::from_f64(t as f64);
    let table = cache.get(params, n);
    let b = block(&table, a1 + tt, a2 + tt, n);
    Ok(-T::from_f64(sign_pow(t as usize)) * b / factorial::<T>(t as usize + n))
}

/// h_n for s = −t, 0 <= n <= t−1.
pub fn h_coeff<T: Real>(params: &SeriesParams, t: u32, n: usize, cache: &AkCache<T>) -> Result<T> {
    if t == 0 || n >= t as usize {
        return Err(Error::Domain(format!("h_n needs 0 <= n < t, got n = {n}, t = {t}")));
    }
    ensure_s(params, -(t as f64), "h_n")?;
    let (a1, a2) = a12::<T>(params);
    let tt = T::from_f64(t as f64);
    let table = cache.get(params, n);
    let gamma = factorial::<T>(t as usize - n - 1);
    Ok(T::from_f64(sign_pow(n)) * gamma / factorial::<T>(n) * block(&table, a1 - tt, a2 - tt, n))
}

/// v_n for s = −t.
pub fn v_coeff<T: Real>(params: &SeriesParams, t: u32, n: usize, cache: &AkCache<T>) -> Result<T> {
    if t == 0 {
        return Err(Error::Domain("v_n needs t >= 1".into()));
    }
    ensure_s(params, -(t as f64), "v_n")?;
    let (a1, a2) = a12::<T>(params);
    let tt = T::from_f64(t as f64);
    let tu = t as usize;
    let table = cache.get(params, tu + n);
    let b = block(&table, a1 - tt, a2 - tt, tu + n);
    Ok(-T::from_f64(sign_pow(tu)) * b / (factorial::<T>(n) * factorial::<T>(tu + n)))
}

/// u_0 for s = −t.
pub fn u0_const<T: Real>(
    params: &SeriesParams,
    t: u32,
    ctl: &TailControl,
    cache: &AkCache<T>,
) -> Result<SeriesValue<T>> {
    if t == 0 {
        return Err(Error::Domain("u0 needs t >= 1".into()));
    }
    ensure_s(params, -(t as f64), "u0")?;
    let tu = t as usize;
    let (a1, a2) = a12::<T>(params);
    let tt = T::from_f64(t as f64);
    let sum = log_weighted_sum("u0", params, tu, ctl, cache)?;
    let table = cache.get(params, tu);
    let psi_common = digamma(T::one())? - digamma(a1)? - digamma(a2)?;
    let (x1, x2) = (a1 - tt, a2 - tt);
    let mut finite = Compensated::new();
    let mut neg_t = T::one();
    for k in 0..=tu {
        let ak = table.plain(k);
        if ak != T::zero() {
            let xk = T::from_usize(k);
            let psi = digamma(T::from_usize(1 + tu - k))? + psi_common;
            finite.add(neg_t * rising(x1 + xk, tu - k) * rising(x2 + xk, tu - k) * ak * psi);
        }
        neg_t *= T::from_usize(k) - tt;
    }
    let finite = T::from_f64(sign_pow(tu)) * finite.value() / factorial::<T>(tu);
    Ok(SeriesValue {
        value: sum.value + finite,
        ..sum
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: &[f64], b: &[f64]) -> SeriesParams {
        SeriesParams::new(a.to_vec(), b.to_vec()).unwrap()
    }

    fn gamma(x: f64) -> f64 {
        ln_gamma_signed(x).unwrap().value()
    }

    fn psi(x: f64) -> f64 {
        digamma(x).unwrap()
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * y.abs().max(1e-300)
    }

    #[test]
    fn g0_p1_is_gauss_constant() {
        let p = params(&[0.5, 0.7], &[1.9]);
        let cache = AkCache::new();
        let v = g0_const::<f64>(&p, &TailControl::default(), &cache).unwrap();
        let expected = gamma(0.5) * gamma(0.7) * gamma(0.7) / (gamma(1.2) * gamma(1.4));
        assert!(close(v.value, expected, 1e-14), "{} vs {expected}", v.value);
        assert_eq!(v.tail_bound, 0.0);
    }

    #[test]
    fn g0_p2_collapses_when_b1_equals_a3() {
        let p = params(&[0.4, 0.6, 1.1], &[1.1, 1.7]);
        let cache = AkCache::new();
        let v = g0_const::<f64>(&p, &TailControl::default(), &cache).unwrap();
        let s = p.s_exponent();
        let expected = gamma(0.4) * gamma(0.6) * gamma(s) / (gamma(0.4 + s) * gamma(0.6 + s));
        assert!(close(v.value, expected, 1e-13));
    }

    #[test]
    fn l0_shares_g0() {
        let p = params(&[0.5, 0.6, 0.9], &[1.3, 1.7]);
        assert!((p.s_exponent() - 1.0).abs() < 1e-15);
        let cache = AkCache::new();
        let ctl = TailControl::default();
        let l0 = l0_const::<f64>(&p, 1, &ctl, &cache).unwrap();
        let g0 = g0_const::<f64>(&p, &ctl, &cache).unwrap();
        assert!(close(l0.value, g0.value, 1e-13));
        let p1 = params(&[0.5, 0.7], &[2.2]);
        let l0 = l0_const::<f64>(&p1, 1, &ctl, &AkCache::new()).unwrap();
        assert!(close(l0.value, 1.0 / 0.35, 1e-14));
    }

    #[test]
    fn finite_coefficients_small_cases() {
        let cache = AkCache::new();
        let p = params(&[0.3, 0.4], &[1.4]);
        let g = g_singular::<f64>(&p, 0, &cache).unwrap();
        assert!(close(g, gamma(-0.7), 1e-14));

        let z = params(&[0.5, 0.5, 0.8], &[1.0, 0.8]);
        let cache = AkCache::new();
        assert_eq!(e_coeff::<f64>(&z, 0, &cache).unwrap(), -1.0);
        let a1 = cache.get(&z, 1).plain(1);
        let e1 = e_coeff::<f64>(&z, 1, &cache).unwrap();
        assert!(close(e1, -(0.25 - a1), 1e-15));

        let t1 = params(&[0.5, 0.5], &[2.0]);
        assert!(close(q_coeff::<f64>(&t1, 1, 0, &AkCache::new()).unwrap(), 1.0, 1e-15));
        let t2 = params(&[0.5, 0.5], &[3.0]);
        assert!(close(q_coeff::<f64>(&t2, 2, 0, &AkCache::new()).unwrap(), -0.5, 1e-15));

        let n2 = params(&[0.6, 0.7], &[-0.7]);
        assert!(close(h_coeff::<f64>(&n2, 2, 0, &AkCache::new()).unwrap(), 1.0, 1e-15));
        let h1 = h_coeff::<f64>(&n2, 2, 1, &AkCache::new()).unwrap();
        assert!(close(h1, -(0.6 - 2.0) * (0.7 - 2.0), 1e-14));
        assert!(h_coeff::<f64>(&n2, 2, 2, &AkCache::new()).is_err());

        let n1 = params(&[0.6, 0.7], &[0.3]);
        let v0 = v_coeff::<f64>(&n1, 1, 0, &AkCache::new()).unwrap();
        assert!(close(v0, (0.6 - 1.0) * (0.7 - 1.0), 1e-14));
    }

    #[test]
    fn precondition_errors() {
        let cache = AkCache::new();
        let p = params(&[0.5, 0.5], &[1.0]);
        assert!(matches!(g_singular::<f64>(&p, 1, &cache), Err(Error::Pole(_))));
        assert!(matches!(q_coeff::<f64>(&p, 1, 0, &cache), Err(Error::Domain(_))));
        let bad = params(&[0.5, 0.5, -0.5], &[1.0, -0.5]);
        assert!(matches!(
            d0_const::<f64>(&bad, &TailControl::default(), &AkCache::new()),
            Err(Error::Convergence { index: 3, .. })
        ));
    }

    #[test]
    fn d0_and_u0_for_p1() {
        let ctl = TailControl::default();
        let z = params(&[0.5, 0.5], &[1.0]);
        let d0 = d0_const::<f64>(&z, &ctl, &AkCache::new()).unwrap();
        assert!(close(d0.value, 2.0 * psi(1.0) - 2.0 * psi(0.5), 1e-14));

        let n1 = params(&[0.6, 0.7], &[0.3]);
        let u0 = u0_const::<f64>(&n1, 1, &ctl, &AkCache::new()).unwrap();
        let expected = -(0.6 - 1.0) * (0.7 - 1.0) * (psi(2.0) + psi(1.0) - psi(0.6) - psi(0.7));
        assert!(close(u0.value, expected, 1e-14));
    }

    #[test]
    fn d0_vanishing_sum_for_p2() {
        let z = params(&[0.5, 0.7, 0.9], &[0.9, 1.2]);
        let d0 = d0_const::<f64>(&z, &TailControl::default(), &AkCache::new()).unwrap();
        assert!(close(d0.value, 2.0 * psi(1.0) - psi(0.5) - psi(0.7), 1e-14));
    }

    #[test]
    fn corollary_one_constant() {
        // constant of the zero-balanced 5F4 expansion: d0 − ψ(1) = −ψ(1) + 3 ln 2
        // after dividing out the prefactor π²/4 of the first term
        let z = params(&[0.5, 0.5, 0.5, 0.5, 1.25], &[1.0, 1.0, 1.0, 0.25]);
        let d0 = d0_const::<f64>(&z, &TailControl::default(), &AkCache::new()).unwrap();
        let target = -psi(1.0) + 3.0 * std::f64::consts::LN_2;
        assert!(
            (d0.value - psi(1.0) - target).abs() < 1e-11,
            "{} vs {target}, bound {}",
            d0.value - psi(1.0),
            d0.tail_bound
        );
    }
}
