//! Direct partial sums and their large-m expansions.
//!
//! Every expansion is assembled from the continuation coefficients: a
//! singular term `c (1−z)^σ` contributes `c · Σ_{l<m} [z^l](1−z)^σ` to the
//! partial sum and `c (1−z)^n ln(1−z)` contributes `c · P_n(m)` with
//!
//! ```text
//!   P_0(m) = ψ(1) − ψ(m),   P_n(m) = (−1)^n (n−1)! / ((m−1)(m−2)⋯(m−n)).
//! ```
//!
//! The m-independent parts are computed once per [`AsymptoticExpansion`], so
//! sweeping over many m is cheap.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coefficients::{AkCache, Compensated};
use crate::continuation::{
    block, d0_const, e_coeff, g0_const, h_coeff, l0_const, q_coeff, u0_const, v_coeff, TailControl,
};
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::params::{SeriesParams, SpClass, SpTag, DEFAULT_EPS_INT};
use crate::real::Real;
use crate::specfun::{digamma, gamma_ratio, gamma_shift_ratio, SignedLog};

/// Which expansion produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theorem::T2 => "T2",
            Theorem::T3 => "T3",
            Theorem::T4 => "T4",
            Theorem::T5 => "T5",
            Theorem::T6 => "T6",
            Theorem::T7 => "T7",
        };
        f.write_str(s)
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T2" | "2" => Ok(Theorem::T2),
            "T3" | "3" => Ok(Theorem::T3),
            "T4" | "4" => Ok(Theorem::T4),
            "T5" | "5" => Ok(Theorem::T5),
            "T6" | "6" => Ok(Theorem::T6),
            "T7" | "7" => Ok(Theorem::T7),
            _ => Err(Error::InvalidParams(format!("unknown theorem `{s}`"))),
        }
    }
}

/// Arithmetic used for an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Precision {
    #[default]
    Double,
    DoubleDouble,
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" | "f64" => Ok(Precision::Double),
            "double-double" | "dd" => Ok(Precision::DoubleDouble),
            _ => Err(Error::InvalidParams(format!("unknown precision `{s}`"))),
        }
    }
}

/// One correction term at a given m.
#[derive(Debug, Clone, PartialEq)]
pub struct Correction<T> {
    pub label: String,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticResult<T> {
    pub value: T,
    pub constant_term: T,
    pub corrections: Vec<Correction<T>>,
    /// θ in residual = O(m^{−θ}).
    pub predicted_order: f64,
    pub theorem: Theorem,
    /// Truncation error estimate carried by the constant term.
    pub tail_bound: f64,
}

// ---------------------------------------------------------------------------
// partial sums

/// Σ_{l=0}^{m−1} Γ(a_1+l)⋯Γ(a_{p+1}+l) / (Γ(b_1+l)⋯Γ(b_p+l) Γ(1+l)).
pub fn direct_partial_sum(params: &SeriesParams, m: usize) -> Result<f64> {
    direct_partial_sum_in::<f64>(params, m)
}

/// [`direct_partial_sum`] in arbitrary [`Real`] arithmetic.
pub fn direct_partial_sum_in<T: Real>(params: &SeriesParams, m: usize) -> Result<T> {
    let term0 = first_term::<T>(params)?;
    Ok(term0 * normalized_partial_sum::<T>(params, m)?)
}

/// Γ(a_1)⋯Γ(a_{p+1}) / (Γ(b_1)⋯Γ(b_p)).
pub fn first_term<T: Real>(params: &SeriesParams) -> Result<T> {
    let a: Vec<T> = params.a().iter().map(|&x| T::from_f64(x)).collect();
    let b: Vec<T> = params.b().iter().map(|&x| T::from_f64(x)).collect();
    Ok(gamma_ratio(&a, &b)?.value())
}

/// Σ_{l=0}^{m−1} (a_1)_l⋯(a_{p+1})_l / ((b_1)_l⋯(b_p)_l l!).
pub fn normalized_partial_sum<T: Real>(params: &SeriesParams, m: usize) -> Result<T> {
    if m == 0 {
        return Err(Error::Domain("partial sum needs m >= 1".into()));
    }
    let a: Vec<T> = params.a().iter().map(|&x| T::from_f64(x)).collect();
    let b: Vec<T> = params.b().iter().map(|&x| T::from_f64(x)).collect();
    let mut acc = Compensated::new();
    let mut term = T::one();
    for l in 0..m {
        acc.add(term);
        let lf = T::from_usize(l);
        let mut num = T::one();
        let mut den = lf + T::one();
        for &x in &a {
            num *= x + lf;
        }
        for &x in &b {
            den *= x + lf;
        }
        term = term * num / den;
    }
    Ok(acc.value())
}

/// Σ_{l=0}^{m−1} (−x)_l / l! = −(1/x) (−x)_m / Γ(m).
pub fn binomial_partial_sum(x: f64, m: usize) -> Result<f64> {
    binomial_partial_sum_in::<f64>(x, m)
}

/// Products up to this length are formed directly.
const BINOMIAL_PRODUCT_LIMIT: usize = 100_000;

pub fn binomial_partial_sum_in<T: Real>(x: T, m: usize) -> Result<T> {
    let xf = x.to_f64();
    if xf.abs() < 1e-14 {
        return Err(Error::Domain(format!("binomial partial sum needs x != 0, got {xf}")));
    }
    if m == 0 {
        return Err(Error::Domain("binomial partial sum needs m >= 1".into()));
    }
    // −(1/x)(−x)_m/Γ(m) = Π_{j=1}^{m−1} (1 − x/j) = Γ(m−x)/(Γ(1−x)Γ(m))
    let is_positive_int = xf >= 1.0 && (xf - xf.round()).abs() <= 1e-12;
    if m <= BINOMIAL_PRODUCT_LIMIT || is_positive_int {
        let mut prod = T::one();
        for j in 1..m {
            prod *= T::one() - x / T::from_usize(j);
            if prod == T::zero() {
                break;
            }
        }
        return Ok(prod);
    }
    let shift = gamma_shift_ratio(T::from_usize(m), -x)?;
    let denom = gamma_ratio(&[T::one() - x], &[])?;
    Ok((shift / denom).value())
}

/// Σ_{l=1}^{m−1} of the coefficients of `(1−z)^n ln(1−z)`, for n ∈ {0, 1, 2}.
pub fn log_term_partial_sum(n: usize, m: usize) -> Result<f64> {
    if n > 2 {
        return Err(Error::Domain(format!(
            "logarithmic terms are supported up to n = 2, got {n}"
        )));
    }
    log_partial_in::<f64>(n, m)
}

fn log_partial_in<T: Real>(n: usize, m: usize) -> Result<T> {
    if m < n + 1 {
        return Err(Error::Domain(format!("log-term partial sum n = {n} needs m >= {}", n + 1)));
    }
    if n == 0 {
        return Ok(digamma(T::one())? - digamma(T::from_usize(m))?);
    }
    let mut v = T::from_f64(if n.is_multiple_of(2) { 1.0 } else { -1.0 });
    for i in 1..n {
        v *= T::from_usize(i);
    }
    for i in 1..=n {
        v /= T::from_usize(m - i);
    }
    Ok(v)
}

/// ln m − 1/(2m) − 1/(12m²).
pub fn psi_expansion(m: usize) -> f64 {
    let mf = m as f64;
    mf.ln() - 0.5 / mf - 1.0 / (12.0 * mf * mf)
}

// ---------------------------------------------------------------------------
// expansions

#[derive(Debug, Clone)]
enum Kind<T> {
    /// constant only
    T2,
    /// c_n with correction c_n Γ(m−s−n)/Γ(m)
    T3 { s: T, coeffs: Vec<T> },
    /// log coefficients for P_0, P_1, P_2
    Log { coeffs: [T; 3], offset: usize },
    T7 { t: u32, growing: Vec<T>, v: [T; 3] },
}

/// The m-independent data of one expansion.
#[derive(Debug, Clone)]
pub struct AsymptoticExpansion<T> {
    theorem: Theorem,
    /// d_0, l_0, g_0 or u_0
    base: T,
    kind: Kind<T>,
    predicted_order: f64,
    next_coefficient: f64,
    tail_bound: f64,
}

impl<T: Real> AsymptoticExpansion<T> {
    /// Constant-only expansion for s > 0.
    pub fn theorem2(params: &SeriesParams, ctl: &TailControl, cache: &AkCache<T>) -> Result<Self> {
        let s = params.s_exponent();
        if s <= 0.0 {
            return Err(Error::Domain(format!("constant-limit expansion needs s > 0, got {s}")));
        }
        let g0 = g0_const(params, ctl, cache)?;
        let c0 = t3_coefficient(params, cache, 0)?;
        Ok(AsymptoticExpansion {
            theorem: Theorem::T2,
            base: g0.value,
            kind: Kind::T2,
            predicted_order: s,
            next_coefficient: c0.to_f64().abs(),
            tail_bound: g0.tail_bound,
        })
    }

    /// Expansion with singular corrections n = 0..=N.
    pub fn theorem3(
        params: &SeriesParams,
        n_order: usize,
        ctl: &TailControl,
        cache: &AkCache<T>,
    ) -> Result<Self> {
        let sf = params.s_exponent();
        if sf <= DEFAULT_EPS_INT && (sf - sf.round()).abs() <= DEFAULT_EPS_INT {
            return Err(Error::Pole(sf));
        }
        if (n_order as f64) <= -sf {
            return Err(Error::Domain(format!("N = {n_order} must exceed −s = {}", -sf)));
        }
        let g0 = g0_const(params, ctl, cache)?;
        let coeffs = (0..=n_order)
            .map(|n| t3_coefficient(params, cache, n))
            .collect::<Result<Vec<T>>>()?;
        let next = t3_coefficient(params, cache, n_order + 1)?;
        Ok(AsymptoticExpansion {
            theorem: Theorem::T3,
            base: g0.value,
            kind: Kind::T3 {
                s: s_value::<T>(params, sf),
                coeffs,
            },
            predicted_order: sf + n_order as f64 + 1.0,
            next_coefficient: next.to_f64().abs(),
            tail_bound: g0.tail_bound,
        })
    }

    /// Zero-balanced expansion.
    pub fn theorem4(params: &SeriesParams, ctl: &TailControl, cache: &AkCache<T>) -> Result<Self> {
        let d0 = d0_const(params, ctl, cache)?;
        let e = |n| e_coeff::<T>(params, n, cache);
        let coeffs = [e(0)?, e(1)?, e(2)?];
        let next = T::from_f64(2.0) * e(3)?;
        Ok(AsymptoticExpansion {
            theorem: Theorem::T4,
            base: d0.value,
            kind: Kind::Log { coeffs, offset: 0 },
            predicted_order: 3.0,
            next_coefficient: next.to_f64().abs(),
            tail_bound: d0.tail_bound,
        })
    }

    /// Expansions for s = 1 (T5) and s = 2 (T6).
    pub fn theorem5_6(
        params: &SeriesParams,
        t: u32,
        ctl: &TailControl,
        cache: &AkCache<T>,
    ) -> Result<Self> {
        let theorem = match t {
            1 => Theorem::T5,
            2 => Theorem::T6,
            _ => return Err(Error::Domain(format!("s = {t} is handled by the general expansion"))),
        };
        let l0 = l0_const(params, t, ctl, cache)?;
        let q = |n| q_coeff::<T>(params, t, n, cache);
        let tu = t as usize;
        let mut coeffs = [T::zero(); 3];
        for (n, c) in coeffs.iter_mut().enumerate().skip(tu) {
            *c = q(n - tu)?;
        }
        let next = T::from_f64(2.0) * q(3 - tu)?;
        Ok(AsymptoticExpansion {
            theorem,
            base: l0.value,
            kind: Kind::Log { coeffs, offset: tu },
            predicted_order: 3.0,
            next_coefficient: next.to_f64().abs(),
            tail_bound: l0.tail_bound,
        })
    }

    /// Expansion for s = −t.
    pub fn theorem7(
        params: &SeriesParams,
        t: u32,
        ctl: &TailControl,
        cache: &AkCache<T>,
    ) -> Result<Self> {
        let u0 = u0_const(params, t, ctl, cache)?;
        let growing = (0..t as usize)
            .map(|n| h_coeff::<T>(params, t, n, cache))
            .collect::<Result<Vec<T>>>()?;
        let v = |n| v_coeff::<T>(params, t, n, cache);
        let next = T::from_f64(2.0) * v(3)?;
        Ok(AsymptoticExpansion {
            theorem: Theorem::T7,
            base: u0.value,
            kind: Kind::T7 {
                t,
                growing,
                v: [v(0)?, v(1)?, v(2)?],
            },
            predicted_order: 3.0,
            next_coefficient: next.to_f64().abs(),
            tail_bound: u0.tail_bound,
        })
    }

    /// Builds the expansion selected by `theorem` for these parameters.
    pub fn build(
        params: &SeriesParams,
        theorem: Theorem,
        n_order: Option<usize>,
        class: SpClass,
        ctl: &TailControl,
        cache: &AkCache<T>,
    ) -> Result<Self> {
        let need = |tag: SpTag, t: u32, what: &str| -> Result<()> {
            if class.tag == tag && (class.t == t || tag == SpTag::NegativeInteger) {
                Ok(())
            } else {
                Err(Error::Domain(format!("{theorem} needs {what}, but s = {}", class.s)))
            }
        };
        match theorem {
            Theorem::T2 => Self::theorem2(params, ctl, cache),
            Theorem::T3 => {
                let n = n_order.unwrap_or_else(|| default_order(class.s));
                Self::theorem3(params, n, ctl, cache)
            }
            Theorem::T4 => {
                need(SpTag::Zero, 0, "s = 0")?;
                Self::theorem4(params, ctl, cache)
            }
            Theorem::T5 => {
                need(SpTag::PositiveInteger, 1, "s = 1")?;
                Self::theorem5_6(params, 1, ctl, cache)
            }
            Theorem::T6 => {
                need(SpTag::PositiveInteger, 2, "s = 2")?;
                Self::theorem5_6(params, 2, ctl, cache)
            }
            Theorem::T7 => {
                need(SpTag::NegativeInteger, 0, "a negative integer s")?;
                Self::theorem7(params, class.t, ctl, cache)
            }
        }
    }

    pub fn theorem(&self) -> Theorem {
        self.theorem
    }

    pub fn predicted_order(&self) -> f64 {
        self.predicted_order
    }

    /// Magnitude of the coefficient of the leading neglected term.
    pub fn next_coefficient(&self) -> f64 {
        self.next_coefficient
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Smallest m the expansion accepts.
    pub fn min_m(&self) -> usize {
        match &self.kind {
            Kind::T2 => 1,
            Kind::T3 { .. } => 1,
            Kind::Log { .. } | Kind::T7 { .. } => 3,
        }
    }

    /// The expansion at partial-sum length m.
    pub fn at(&self, m: usize) -> Result<AsymptoticResult<T>> {
        if m < self.min_m() {
            return Err(Error::Domain(format!(
                "{} needs m >= {}, got {m}",
                self.theorem,
                self.min_m()
            )));
        }
        let mut corrections = Vec::new();
        let constant_term;
        match &self.kind {
            Kind::T2 => constant_term = self.base,
            Kind::T3 { s, coeffs } => {
                constant_term = self.base;
                let mt = T::from_usize(m);
                for (n, &c) in coeffs.iter().enumerate() {
                    let shift = -*s - T::from_usize(n);
                    let top = mt + shift;
                    let tf = top.to_f64();
                    if tf <= 0.5 && (tf - tf.round()).abs() <= 1e-9 {
                        return Err(Error::Domain(format!(
                            "Γ(m − s − {n}) has a pole at m = {m}; use a larger m"
                        )));
                    }
                    let ratio = gamma_shift_ratio(mt, shift)?.value();
                    corrections.push(Correction {
                        label: format!("n={n}"),
                        value: c * ratio,
                    });
                }
            }
            Kind::Log { coeffs, offset } => {
                // P_0 = ψ(1) − ψ(m) splits into the constant ψ(1) part and ψ(m)
                let psi1 = digamma(T::one())?;
                constant_term = self.base + coeffs[0] * psi1;
                if *offset == 0 {
                    corrections.push(Correction {
                        label: "psi(m)".into(),
                        value: -coeffs[0] * digamma(T::from_usize(m))?,
                    });
                }
                for n in (*offset).max(1)..=2 {
                    corrections.push(Correction {
                        label: log_label(n).into(),
                        value: coeffs[n] * log_partial_in::<T>(n, m)?,
                    });
                }
            }
            Kind::T7 { t, growing, v } => {
                let psi1 = digamma(T::one())?;
                constant_term = self.base + v[0] * psi1;
                for (n, &h) in growing.iter().enumerate() {
                    let x = -T::from_usize(*t as usize - n);
                    corrections.push(Correction {
                        label: format!("growing n={n}"),
                        value: h * binomial_partial_sum_in(x, m)?,
                    });
                }
                corrections.push(Correction {
                    label: "psi(m)".into(),
                    value: -v[0] * digamma(T::from_usize(m))?,
                });
                for n in 1..=2 {
                    corrections.push(Correction {
                        label: log_label(n).into(),
                        value: v[n] * log_partial_in::<T>(n, m)?,
                    });
                }
            }
        }
        let mut acc = Compensated::new();
        acc.add(constant_term);
        for c in &corrections {
            acc.add(c.value);
        }
        Ok(AsymptoticResult {
            value: acc.value(),
            constant_term,
            corrections,
            predicted_order: self.predicted_order,
            theorem: self.theorem,
            tail_bound: self.tail_bound,
        })
    }
}

fn log_label(n: usize) -> &'static str {
    match n {
        1 => "(m-1)^-1",
        _ => "((m-1)(m-2))^-1",
    }
}

fn s_value<T: Real>(params: &SeriesParams, sf: f64) -> T {
    let near = sf.round();
    if (sf - near).abs() <= DEFAULT_EPS_INT {
        // exact integer limit
        return T::from_f64(near);
    }
    let sb = params.b().iter().fold(T::zero(), |s, &x| s + T::from_f64(x));
    let sa = params.a().iter().fold(T::zero(), |s, &x| s + T::from_f64(x));
    sb - sa
}

/// Coefficient of Γ(m−s−n)/Γ(m): −(−1)^n/(s+n) · g-structure / n!.
fn t3_coefficient<T: Real>(params: &SeriesParams, cache: &AkCache<T>, n: usize) -> Result<T> {
    let sf = params.s_exponent();
    let s = s_value::<T>(params, sf);
    let a1 = T::from_f64(params.a()[0]);
    let a2 = T::from_f64(params.a()[1]);
    let table = cache.get(params, n);
    let mut fact = T::one();
    for i in 2..=n {
        fact *= T::from_usize(i);
    }
    let sign = if n.is_multiple_of(2) { -T::one() } else { T::one() };
    Ok(sign / (s + T::from_usize(n)) * block(&table, a1 + s, a2 + s, n) / fact)
}

/// Default truncation order: max(0, ⌈−s⌉) + 1.
pub fn default_order(s: f64) -> usize {
    let c = (-s).ceil();
    (if c > 0.0 { c as usize } else { 0 }) + 1
}

/// The expansion the dispatcher picks for a given class of s.
pub fn default_theorem(class: SpClass) -> Theorem {
    match class.tag {
        SpTag::Zero => Theorem::T4,
        SpTag::PositiveInteger if class.t == 1 => Theorem::T5,
        SpTag::PositiveInteger if class.t == 2 => Theorem::T6,
        SpTag::NegativeInteger => Theorem::T7,
        SpTag::PositiveInteger | SpTag::NonInteger => Theorem::T3,
    }
}

// ---------------------------------------------------------------------------
// dispatcher

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Truncation order for the general expansion.
    pub n_order: Option<usize>,
    pub force_theorem: Option<Theorem>,
    pub ctl: TailControl,
    pub eps_int: f64,
    pub precision: Precision,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            n_order: None,
            force_theorem: None,
            ctl: TailControl::default(),
            eps_int: DEFAULT_EPS_INT,
            precision: Precision::Double,
        }
    }
}

/// Direct sum, expansion and their difference at one m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub m: usize,
    pub direct: f64,
    pub asymptotic: f64,
    pub residual: f64,
    pub predicted_order: f64,
    pub theorem: Theorem,
}

/// Evaluates the dispatched expansion at one m.
pub fn evaluate(params: &SeriesParams, m: usize, opts: &EvalOptions) -> Result<EvalReport> {
    Ok(evaluate_many(params, &[m], opts)?.remove(0))
}

/// Evaluates at several m, sharing the expansion and the direct summation.
pub fn evaluate_many(params: &SeriesParams, ms: &[usize], opts: &EvalOptions) -> Result<Vec<EvalReport>> {
    match opts.precision {
        Precision::Double => Evaluator::<f64>::new(params, opts)?.reports(ms),
        Precision::DoubleDouble => Evaluator::<DoubleDouble>::new(params, opts)?.reports(ms),
    }
}

/// Expansion plus direct summation for one parameter set.
///
/// When s is classified as an integer the direct sums are taken with b_p
/// moved by the (sub-`eps_int`) distance of s from that integer, so that
/// both sides describe the same series. Otherwise an offset of one ulp in
/// s would grow like m^{−s} ln m against expansions that assume s exact.
pub struct Evaluator<T> {
    a: Vec<T>,
    b: Vec<T>,
    expansion: AsymptoticExpansion<T>,
    term0: T,
}

/// Parameters in working precision, with b_p snapped for integer s.
fn working_params<T: Real>(params: &SeriesParams, class: SpClass) -> (Vec<T>, Vec<T>) {
    let a: Vec<T> = params.a().iter().map(|&x| T::from_f64(x)).collect();
    let mut b: Vec<T> = params.b().iter().map(|&x| T::from_f64(x)).collect();
    if class.tag != SpTag::NonInteger {
        let target = match class.tag {
            SpTag::NegativeInteger => -(class.t as f64),
            _ => class.t as f64,
        };
        let s = b.iter().fold(T::zero(), |acc, &x| acc + x) - a.iter().fold(T::zero(), |acc, &x| acc + x);
        let last = b.len() - 1;
        b[last] -= s - T::from_f64(target);
    }
    (a, b)
}

impl<T: Real> Evaluator<T> {
    pub fn new(params: &SeriesParams, opts: &EvalOptions) -> Result<Self> {
        let class = params.classify(opts.eps_int);
        let theorem = opts.force_theorem.unwrap_or_else(|| default_theorem(class));
        let cache = AkCache::new();
        let expansion =
            AsymptoticExpansion::build(params, theorem, opts.n_order, class, &opts.ctl, &cache)?;
        let (a, b) = working_params::<T>(params, class);
        let term0 = gamma_ratio(&a, &b)?.value();
        Ok(Evaluator {
            a,
            b,
            expansion,
            term0,
        })
    }

    pub fn expansion(&self) -> &AsymptoticExpansion<T> {
        &self.expansion
    }

    /// Reports for the given m values, in the order given.
    pub fn reports(&self, ms: &[usize]) -> Result<Vec<EvalReport>> {
        let direct = self.direct_sums(ms)?;
        ms.iter()
            .zip(direct)
            .map(|(&m, d)| {
                let asym = self.expansion.at(m)?;
                Ok(EvalReport {
                    m,
                    direct: d.to_f64(),
                    asymptotic: asym.value.to_f64(),
                    residual: (d - asym.value).to_f64(),
                    predicted_order: asym.predicted_order,
                    theorem: asym.theorem,
                })
            })
            .collect()
    }

    /// Direct partial sums for every m in one pass over l.
    pub fn direct_sums(&self, ms: &[usize]) -> Result<Vec<T>> {
        if ms.contains(&0) {
            return Err(Error::Domain("partial sum needs m >= 1".into()));
        }
        let top = ms.iter().copied().max().unwrap_or(0);
        let (a, b) = (&self.a, &self.b);
        let mut at = vec![T::zero(); top + 1];
        let mut acc = Compensated::new();
        let mut term = T::one();
        for (l, slot) in at.iter_mut().enumerate().skip(1) {
            acc.add(term);
            *slot = acc.value();
            let lf = T::from_usize(l - 1);
            let mut num = T::one();
            let mut den = lf + T::one();
            for &x in a {
                num *= x + lf;
            }
            for &x in b {
                den *= x + lf;
            }
            term = term * num / den;
        }
        Ok(ms.iter().map(|&m| self.term0 * at[m]).collect())
    }
}

/// Least-squares slope of ln|r| against ln m.
pub fn fit_slope(ms: &[usize], residuals: &[f64]) -> Result<f64> {
    if ms.len() != residuals.len() || ms.len() < 2 {
        return Err(Error::Domain("slope fit needs at least two points".into()));
    }
    if residuals.iter().any(|r| *r == 0.0 || !r.is_finite()) {
        return Err(Error::Domain("slope fit needs non-zero finite residuals".into()));
    }
    let xs: Vec<f64> = ms.iter().map(|&m| (m as f64).ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.abs().ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// Geometric grid `start · 2^k`, k = 0..count.
pub fn geometric_grid(start: usize, count: usize) -> Vec<usize> {
    (0..count).map(|k| start << k).collect()
}

// ---------------------------------------------------------------------------
// spec-level wrappers in double precision

pub fn asymptotic_theorem2(params: &SeriesParams, ctl: &TailControl) -> Result<AsymptoticResult<f64>> {
    AsymptoticExpansion::theorem2(params, ctl, &AkCache::new())?.at(1)
}

pub fn asymptotic_theorem3(
    params: &SeriesParams,
    n_order: usize,
    m: usize,
    ctl: &TailControl,
) -> Result<AsymptoticResult<f64>> {
    AsymptoticExpansion::theorem3(params, n_order, ctl, &AkCache::new())?.at(m)
}

pub fn asymptotic_theorem4(params: &SeriesParams, m: usize, ctl: &TailControl) -> Result<AsymptoticResult<f64>> {
    check_s(params, 0)?;
    AsymptoticExpansion::theorem4(params, ctl, &AkCache::new())?.at(m)
}

pub fn asymptotic_theorem5(params: &SeriesParams, m: usize, ctl: &TailControl) -> Result<AsymptoticResult<f64>> {
    AsymptoticExpansion::theorem5_6(params, 1, ctl, &AkCache::new())?.at(m)
}

pub fn asymptotic_theorem6(params: &SeriesParams, m: usize, ctl: &TailControl) -> Result<AsymptoticResult<f64>> {
    AsymptoticExpansion::theorem5_6(params, 2, ctl, &AkCache::new())?.at(m)
}

pub fn asymptotic_theorem7(
    params: &SeriesParams,
    t: u32,
    m: usize,
    ctl: &TailControl,
) -> Result<AsymptoticResult<f64>> {
    check_s(params, -(t as i64))?;
    AsymptoticExpansion::theorem7(params, t, ctl, &AkCache::new())?.at(m)
}

fn check_s(params: &SeriesParams, s: i64) -> Result<()> {
    let actual = params.s_exponent();
    if (actual - s as f64).abs() > DEFAULT_EPS_INT {
        return Err(Error::Domain(format!("expansion needs s = {s}, but s = {actual}")));
    }
    Ok(())
}

/// Convenience: an m-th term Γ(a+m)/(Γ(b+m) Γ(1+m)) products, via gamma ratios.
pub fn series_term(params: &SeriesParams, l: usize) -> Result<SignedLog<f64>> {
    let lf = l as f64;
    let num: Vec<f64> = params.a().iter().map(|&x| x + lf).collect();
    let mut den: Vec<f64> = params.b().iter().map(|&x| x + lf).collect();
    den.push(1.0 + lf);
    gamma_ratio(&num, &den)
}
