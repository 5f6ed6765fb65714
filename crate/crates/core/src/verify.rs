//! Built-in verification suites.
//!
//! Each suite returns a [`SuiteReport`] made of named checks, each a measured
//! quantity compared with a limit. Slope checks fit ln|residual| against
//! ln m by least squares; they run in double-double arithmetic because the
//! residuals at the top of the grids fall far below double precision.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{
    binomial_partial_sum, direct_partial_sum_in, fit_slope, geometric_grid, EvalOptions, Evaluator,
    Precision, Theorem,
};
use crate::coefficients::{ak3_alt, ak4_alt, ak_table_nested, AltVariant};
use crate::continuation::TailControl;
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::params::SeriesParams;
use crate::real::Real;
use crate::specfun::{digamma, ln_gamma_signed, SignedLog};

/// One measured quantity against its limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    /// Passing region: `|value − target| <= limit`.
    pub target: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(label: impl Into<String>, value: f64, limit: f64) -> Self {
        Check {
            label: label.into(),
            value,
            target: 0.0,
            limit,
            passed: value.is_finite() && value.abs() <= limit,
        }
    }

    fn near(label: impl Into<String>, value: f64, target: f64, limit: f64) -> Self {
        Check {
            label: label.into(),
            value,
            target,
            limit,
            passed: value.is_finite() && (value - target).abs() <= limit,
        }
    }

    fn failed(label: impl Into<String>, why: &Error) -> Self {
        Check {
            label: format!("{} ({why})", label.into()),
            value: f64::NAN,
            target: 0.0,
            limit: 0.0,
            passed: false,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "ok" } else { "FAIL" };
        if self.target == 0.0 {
            write!(f, "{verdict} {}: {:.3e} (limit {:.1e})", self.label, self.value.abs(), self.limit)
        } else {
            write!(
                f,
                "{verdict} {}: {:.4} (expected {:.2} ± {})",
                self.label, self.value, self.target, self.limit
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(name: impl Into<String>) -> Self {
        SuiteReport {
            name: name.into(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// Largest |value| over the checks with a zero target, if any.
    pub fn max_error(&self) -> Option<f64> {
        self.checks
            .iter()
            .filter(|c| c.target == 0.0)
            .map(|c| c.value.abs())
            .reduce(f64::max)
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let failing: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.to_string())
            .collect();
        if failing.is_empty() {
            match self.max_error() {
                Some(e) => format!("{verdict} {} ({} checks, max error {e:.3e})", self.name, self.checks.len()),
                None => format!("{verdict} {} ({} checks)", self.name, self.checks.len()),
            }
        } else {
            format!("{verdict} {}: {}", self.name, failing.join("; "))
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// parameter sets

/// The zero-balanced 5F4 with a_1..a_4 = 1/2, a_5 = 5/4, b = (1, 1, 1, 1/4).
pub fn corollary1_params() -> SeriesParams {
    SeriesParams::new(vec![0.5, 0.5, 0.5, 0.5, 1.25], vec![1.0, 1.0, 1.0, 0.25])
        .expect("valid parameters")
}

/// The three-parameter zero-balanced 5F4 family.
pub fn corollary2_params(a: f64, b: f64, c: f64) -> Result<SeriesParams> {
    let sigma = a + b + c;
    let params = SeriesParams::new(
        vec![a, b, c, sigma - 1.0, (sigma + 1.0) / 2.0],
        vec![b + c, c + a, a + b, (sigma - 1.0) / 2.0],
    )?;
    if sigma - 1.0 <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "a + b + c = {sigma} must exceed 1 so that a_4 and b_4 are positive"
        )));
    }
    params.check_convergence()?;
    Ok(params)
}

/// Closed-form right side of the first corollary.
pub fn corollary1_rhs<T: Real>(m: usize) -> Result<T> {
    let mt = T::from_usize(m);
    let one = T::one();
    let m1 = mt - one;
    let m2 = mt - T::from_f64(2.0);
    Ok(digamma(mt)? - digamma(one)? + T::from_f64(3.0) * T::from_f64(2.0).ln()
        + one / (T::from_f64(4.0) * m1)
        - one / (T::from_f64(8.0) * m1 * m2))
}

/// Closed-form right side of the second corollary.
pub fn corollary2_rhs<T: Real>(a: f64, b: f64, c: f64, m: usize) -> Result<T> {
    let (at, bt, ct) = (T::from_f64(a), T::from_f64(b), T::from_f64(c));
    let sigma = at + bt + ct;
    let one = T::one();
    let half = T::from_f64(0.5);
    let mt = T::from_usize(m);
    let m1 = mt - one;
    let m2 = mt - T::from_f64(2.0);
    Ok(digamma(mt)?
        + half * (digamma(one)? - digamma(at)? - digamma(bt)? - digamma(ct)?)
        + half * (sigma - one) / m1
        + T::from_f64(0.25) * (T::from_f64(2.0) * at * bt * ct - sigma * (sigma - one)) / (m1 * m2))
}

/// Tail control for the double-double slope runs.
fn slope_ctl() -> TailControl {
    TailControl {
        rel_tol: 1e-18,
        ..TailControl::default()
    }
}

fn dd_options(n_order: Option<usize>) -> EvalOptions {
    EvalOptions {
        n_order,
        ctl: slope_ctl(),
        precision: Precision::DoubleDouble,
        ..EvalOptions::default()
    }
}

/// Residuals `direct − closed form` in double-double.
fn closed_form_residuals(
    params: &SeriesParams,
    ms: &[usize],
    rhs: impl Fn(usize) -> Result<DoubleDouble>,
) -> Result<Vec<f64>> {
    ms.iter()
        .map(|&m| Ok((direct_partial_sum_in::<DoubleDouble>(params, m)? - rhs(m)?).to_f64()))
        .collect()
}

fn slope_check(label: &str, ms: &[usize], residuals: &[f64], expected: f64, tol: f64) -> Check {
    match fit_slope(ms, residuals) {
        Ok(s) => Check::near(label, s, expected, tol),
        Err(e) => Check::failed(label, &e),
    }
}

// ---------------------------------------------------------------------------
// corollaries

/// Direct sum against the first corollary's closed form.
pub fn corollary1(m: usize) -> SuiteReport {
    let mut report = SuiteReport::new("corollary1");
    let params = corollary1_params();
    let grid = geometric_grid(100, 6);
    let mut ms = grid.clone();
    ms.push(m);
    match closed_form_residuals(&params, &ms, corollary1_rhs::<DoubleDouble>) {
        Ok(r) => {
            report
                .checks
                .push(Check::at_most(format!("|residual| at m={m}"), r[grid.len()], 1e-7));
            report
                .checks
                .push(slope_check("residual slope m=100..3200", &grid, &r[..grid.len()], -3.0, 0.1));
        }
        Err(e) => report.checks.push(Check::failed("evaluation", &e)),
    }
    report
}

/// Direct sum against the second corollary's closed form.
pub fn corollary2(a: f64, b: f64, c: f64, m: usize) -> SuiteReport {
    let mut report = SuiteReport::new(format!("corollary2 (a,b,c)=({a},{b},{c})"));
    let params = match corollary2_params(a, b, c) {
        Ok(p) => p,
        Err(e) => {
            report.checks.push(Check::failed("parameters", &e));
            return report;
        }
    };
    let grid = geometric_grid(100, 6);
    let mut ms = grid.clone();
    ms.push(m);
    match closed_form_residuals(&params, &ms, |m| corollary2_rhs::<DoubleDouble>(a, b, c, m)) {
        Ok(r) => {
            report
                .checks
                .push(Check::at_most(format!("|residual| at m={m}"), r[grid.len()], 1e-6));
            report
                .checks
                .push(slope_check("residual slope m=100..3200", &grid, &r[..grid.len()], -3.0, 0.1));
            if a == 0.5 && b == 0.5 && c == 0.5 {
                let same_params = params == corollary1_params();
                let c1 = closed_form_residuals(&corollary1_params(), &[m], corollary1_rhs::<DoubleDouble>);
                let diff = match c1 {
                    Ok(c1) if same_params => (c1[0] - r[grid.len()]).abs(),
                    _ => f64::INFINITY,
                };
                report
                    .checks
                    .push(Check::at_most("difference from corollary1 residual", diff, 1e-15));
            }
        }
        Err(e) => report.checks.push(Check::failed("evaluation", &e)),
    }
    report
}

// ---------------------------------------------------------------------------
// expansions

/// Measured slope and top-of-grid residual of the dispatched expansion.
fn expansion_slope(
    label: &str,
    params: &SeriesParams,
    n_order: Option<usize>,
    grid: &[usize],
    expected: f64,
    tol: f64,
) -> Check {
    let run = || -> Result<f64> {
        let ev = Evaluator::<DoubleDouble>::new(params, &dd_options(n_order))?;
        let r: Vec<f64> = ev.reports(grid)?.iter().map(|r| r.residual).collect();
        fit_slope(grid, &r)
    };
    match run() {
        Ok(s) => Check::near(label, s, expected, tol),
        Err(e) => Check::failed(label, &e),
    }
}

/// |direct − expansion| at one m in double precision.
fn residual_at(label: &str, params: &SeriesParams, m: usize, limit: f64) -> Check {
    let run = || -> Result<f64> {
        let ev = Evaluator::<f64>::new(params, &EvalOptions::default())?;
        Ok(ev.reports(&[m])?[0].residual)
    };
    match run() {
        Ok(r) => Check::at_most(label, r, limit),
        Err(e) => Check::failed(label, &e),
    }
}

/// Residual order of the general expansion for N = 0..=3 at s = 0.7.
pub fn theorem3_order() -> SuiteReport {
    let mut report = SuiteReport::new("theorem3-order");
    let params = SeriesParams::new(vec![0.5, 0.7], vec![1.9]).expect("valid");
    let s = params.s_exponent();
    let grid = geometric_grid(200, 6);
    for n in 0..=3 {
        report.checks.push(expansion_slope(
            &format!("N={n} slope m=200..6400"),
            &params,
            Some(n),
            &grid,
            -(s + n as f64 + 1.0),
            0.05,
        ));
    }
    report
}

/// Random zero-balanced p = 2 draws with parameters in (0.2, 2).
pub fn zero_balanced_random(draws: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new(format!("theorem4-random ({draws} draws, seed {seed})"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = geometric_grid(100, 7);
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < draws && attempts < 1000 * draws.max(1) {
        attempts += 1;
        let a: Vec<f64> = (0..3).map(|_| rng.random_range(0.2..2.0)).collect();
        let b1: f64 = rng.random_range(0.2..2.0);
        let b2 = a.iter().sum::<f64>() - b1;
        if !(b2 > 0.2 && b2 < 2.0) {
            continue;
        }
        let Ok(params) = SeriesParams::new(a, vec![b1, b2]) else {
            continue;
        };
        // the slope is meaningless when the leading neglected term vanishes
        let next = Evaluator::<f64>::new(&params, &EvalOptions::default())
            .map(|ev| ev.expansion().next_coefficient());
        if matches!(next, Ok(c) if c < 1e-12) {
            continue;
        }
        accepted += 1;
        report
            .checks
            .push(residual_at(&format!("draw {accepted} |residual| m=2000"), &params, 2000, 1e-7));
        report.checks.push(expansion_slope(
            &format!("draw {accepted} ({params}) slope m=100..6400"),
            &params,
            None,
            &grid,
            -3.0,
            0.1,
        ));
    }
    report
}

/// Fixed parameter sets for s = 1, 2, −1, −2.
pub fn integer_cases() -> Vec<(Theorem, SeriesParams)> {
    let p = |a: &[f64], b: &[f64]| SeriesParams::new(a.to_vec(), b.to_vec()).expect("valid");
    vec![
        (Theorem::T5, p(&[0.5, 0.5, 0.5], &[1.0, 1.5])),
        (Theorem::T6, p(&[0.4, 0.7, 0.9], &[1.6, 2.4])),
        (Theorem::T7, p(&[0.6, 0.7, 0.8], &[0.5, 0.6])),
        (Theorem::T7, p(&[0.6, 0.7, 0.8], &[0.5, -0.4])),
    ]
}

/// Residual order and size for s = 1, 2, −1, −2.
pub fn integer_theorems() -> SuiteReport {
    let mut report = SuiteReport::new("theorems5-7");
    let grid = geometric_grid(100, 7);
    for (theorem, params) in integer_cases() {
        let s = params.s_exponent().round();
        let dispatched = Evaluator::<f64>::new(&params, &EvalOptions::default())
            .map(|ev| ev.expansion().theorem());
        if dispatched != Ok(theorem) {
            report.checks.push(Check::failed(
                format!("s={s} dispatch"),
                &Error::Domain(format!("expected {theorem}, got {dispatched:?}")),
            ));
            continue;
        }
        report
            .checks
            .push(residual_at(&format!("{theorem} s={s} |residual| m=2000"), &params, 2000, 1e-6));
        report.checks.push(expansion_slope(
            &format!("{theorem} s={s} slope m=100..6400"),
            &params,
            None,
            &grid,
            -3.0,
            0.1,
        ));
    }
    report
}

/// The general expansion at s = 1 (N = 1) and s = 2 (N = 0) against the
/// dedicated integer expansions.
pub fn integer_limit(m: usize) -> SuiteReport {
    let mut report = SuiteReport::new("integer-limit");
    let cases = integer_cases();
    let gauss = SeriesParams::new(vec![0.5, 0.5], vec![2.0]).expect("valid");
    for (theorem, params, n) in [
        (Theorem::T5, &gauss, 1),
        (Theorem::T5, &cases[0].1, 1),
        (Theorem::T6, &cases[1].1, 0),
    ] {
        let run = || -> Result<f64> {
            let general = EvalOptions {
                n_order: Some(n),
                force_theorem: Some(Theorem::T3),
                ..EvalOptions::default()
            };
            let t3 = Evaluator::<f64>::new(params, &general)?.reports(&[m])?[0].asymptotic;
            let special = Evaluator::<f64>::new(params, &EvalOptions::default())?;
            if special.expansion().theorem() != theorem {
                return Err(Error::Domain(format!("expected {theorem}")));
            }
            let tk = special.reports(&[m])?[0].asymptotic;
            Ok((t3 - tk).abs() / tk.abs())
        };
        let label = format!("p={} |T3(N={n}) − {theorem}| / |{theorem}| at m={m}", params.p());
        report.checks.push(match run() {
            Ok(v) => Check::at_most(label, v, 1e-10),
            Err(e) => Check::failed(label, &e),
        });
    }
    report
}

/// p = 1 direct sums against the Gauss constant.
pub fn gauss_limit() -> SuiteReport {
    let mut report = SuiteReport::new("gauss-limit");
    let grid = geometric_grid(100, 6);
    for (a, b) in [([0.5, 0.7], 1.5), ([0.5, 0.7], 1.9), ([0.4, 0.6], 2.5)] {
        let params = SeriesParams::new(a.to_vec(), vec![b]).expect("valid");
        let s = params.s_exponent();
        let run = || -> Result<f64> {
            let opts = EvalOptions {
                force_theorem: Some(Theorem::T2),
                ..dd_options(None)
            };
            let ev = Evaluator::<DoubleDouble>::new(&params, &opts)?;
            let r: Vec<f64> = ev.reports(&grid)?.iter().map(|r| r.residual).collect();
            fit_slope(&grid, &r)
        };
        let label = format!("s={s:.1} slope m=100..3200");
        report.checks.push(match run() {
            Ok(v) => Check::near(label, v, -s, 0.05),
            Err(e) => Check::failed(label, &e),
        });
    }
    report
}

// ---------------------------------------------------------------------------
// identities

/// Nested A_k against both alternative representations for p = 3 or 4.
pub fn ak_cross(p: usize, k_max: usize, draws: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new(format!("ak-cross p={p} (k<={k_max}, {draws} draws, seed {seed})"));
    if p != 3 && p != 4 {
        report.checks.push(Check::failed(
            "p",
            &Error::InvalidParams(format!("alternative representations exist for p = 3, 4; got {p}")),
        ));
        return report;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut skipped = 0usize;
    for _ in 0..draws {
        let a: Vec<f64> = (0..=p).map(|_| rng.random_range(0.1..2.0)).collect();
        let b: Vec<f64> = (0..p).map(|_| rng.random_range(0.1..2.0)).collect();
        let params = SeriesParams::new(a, b).expect("positive parameters are valid");
        // the alternative forms cancel badly in f64 at larger k, so all
        // three are evaluated in double-double
        let table = ak_table_nested::<DoubleDouble>(&params, k_max);
        for k in 0..=k_max {
            let nested = table.value(k);
            for variant in [AltVariant::First, AltVariant::Second] {
                let alt = if p == 3 {
                    ak3_alt::<DoubleDouble>(&params, k, variant)
                } else {
                    ak4_alt::<DoubleDouble>(&params, k, variant)
                };
                match alt {
                    Ok(alt) => worst = worst.max(relative_gap(nested, alt)),
                    Err(Error::DegenerateRepresentation(_)) => skipped += 1,
                    Err(e) => {
                        report.checks.push(Check::failed(format!("k={k}"), &e));
                        return report;
                    }
                }
            }
        }
    }
    report
        .checks
        .push(Check::at_most("max relative discrepancy", worst, 1e-12));
    if skipped > 0 {
        report.name.push_str(&format!(", {skipped} degenerate evaluations skipped"));
    }
    report
}

fn relative_gap<T: Real>(x: SignedLog<T>, y: SignedLog<T>) -> f64 {
    if x.is_zero() && y.is_zero() {
        return 0.0;
    }
    if x.is_zero() || y.is_zero() || x.sign != y.sign {
        // compare on the scale of the non-zero one
        return if x.is_zero() || y.is_zero() { 1.0 } else { 2.0 };
    }
    // |x − y| / max(|x|, |y|) = 1 − exp(−|ln|x| − ln|y||)
    -(-(x.log_abs - y.log_abs).to_f64().abs()).exp_m1()
}

/// Binomial partial-sum identity against a double-double brute force.
pub fn binomial_identity(draws: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new(format!("binomial-identity ({draws} draws, seed {seed})"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < draws {
        let x: f64 = rng.random_range(-5.0..5.0);
        let m: usize = rng.random_range(1..=100);
        if x.abs() < 1e-3 {
            continue;
        }
        done += 1;
        let exact = match binomial_partial_sum(x, m) {
            Ok(v) => v,
            Err(e) => {
                report.checks.push(Check::failed(format!("x={x}, m={m}"), &e));
                return report;
            }
        };
        let xd = DoubleDouble::from(x);
        let mut brute = DoubleDouble::from(0.0);
        let mut term = DoubleDouble::from(1.0);
        for l in 0..m {
            brute += term;
            let lf = DoubleDouble::from(l as f64);
            term = term * (lf - xd) / (lf + DoubleDouble::from(1.0));
        }
        let gap = ((DoubleDouble::from(exact) - brute) / brute).to_f64().abs();
        worst = worst.max(gap);
    }
    report
        .checks
        .push(Check::at_most("max relative discrepancy", worst, 1e-13));
    report
}

/// sin(πx) with exact argument reduction.
fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (std::f64::consts::PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Gamma recurrence and reflection, digamma recurrence.
pub fn specfun_contracts(draws: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new(format!("specfun ({draws} draws, seed {seed})"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let near_pole = |x: f64, d: f64| x <= 0.5 && (x - x.round()).abs() < d;
    let (mut rec, mut refl, mut dig) = (0.0f64, 0.0f64, 0.0f64);
    let mut n = 0;
    while n < draws {
        let x: f64 = rng.random_range(-20.0..20.0);
        if near_pole(x, 1e-6) || near_pole(x + 1.0, 1e-6) {
            continue;
        }
        n += 1;
        let (g0, g1) = match (ln_gamma_signed(x), ln_gamma_signed(x + 1.0)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                report.checks.push(Check::failed("ln_gamma", &e));
                return report;
            }
        };
        // Γ(x+1) = x Γ(x): compare logs, and signs exactly
        let sign_ok = g1.sign == g0.sign * if x < 0.0 { -1 } else { 1 };
        let gap = if sign_ok {
            (g1.log_abs - g0.log_abs - x.abs().ln()).abs()
        } else {
            f64::INFINITY
        };
        rec = rec.max(-(-gap).exp_m1());
    }
    report
        .checks
        .push(Check::at_most("gamma recurrence max relative error", rec, 1e-12));
    let mut n = 0;
    while n < draws {
        let x: f64 = rng.random_range(-10.0..10.0);
        if (x - x.round()).abs() < 1e-6 {
            continue;
        }
        n += 1;
        let (g, h) = (
            ln_gamma_signed(x).expect("non-integer"),
            ln_gamma_signed(1.0 - x).expect("non-integer"),
        );
        let s = sin_pi(x);
        let sign_ok = (g.sign * h.sign) as f64 * s.signum() > 0.0;
        let gap = if sign_ok {
            (g.log_abs + h.log_abs + s.abs().ln() - std::f64::consts::PI.ln()).abs()
        } else {
            f64::INFINITY
        };
        refl = refl.max(-(-gap).exp_m1());
    }
    report
        .checks
        .push(Check::at_most("gamma reflection max relative error", refl, 1e-11));
    let mut n = 0;
    while n < draws {
        let x: f64 = rng.random_range(-10.0..10.0);
        if near_pole(x, 1e-3) {
            continue;
        }
        n += 1;
        let d = digamma(x + 1.0).expect("not a pole") - digamma(x).expect("not a pole");
        dig = dig.max((d - 1.0 / x).abs());
    }
    report
        .checks
        .push(Check::at_most("digamma recurrence max absolute error", dig, 1e-12));
    report
}

/// Suites understood by [`run_suite`].
pub const SUITES: &[&str] = &[
    "corollary1",
    "corollary2",
    "ak-cross",
    "binomial",
    "integer-limit",
    "theorem3",
    "theorem4",
    "theorems5-7",
    "gauss",
    "specfun",
];

/// Inputs shared by the suites; unused fields are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub m: usize,
    pub abc: Vec<(f64, f64, f64)>,
    pub p: Vec<usize>,
    pub k: usize,
    pub draws: Option<usize>,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            m: 1000,
            abc: vec![(0.3, 0.5, 0.7), (0.5, 0.5, 0.5)],
            p: vec![3, 4],
            k: 20,
            draws: None,
            seed: 7,
        }
    }
}

/// Runs one named suite.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<Vec<SuiteReport>> {
    let reports = match name {
        "corollary1" => vec![corollary1(opts.m)],
        "corollary2" => opts
            .abc
            .iter()
            .map(|&(a, b, c)| corollary2(a, b, c, opts.m))
            .collect(),
        "ak-cross" => opts
            .p
            .iter()
            .map(|&p| ak_cross(p, opts.k, opts.draws.unwrap_or(100), opts.seed))
            .collect(),
        "binomial" => vec![binomial_identity(opts.draws.unwrap_or(200), opts.seed)],
        "integer-limit" => vec![integer_limit(500)],
        "theorem3" => vec![theorem3_order()],
        "theorem4" => vec![zero_balanced_random(opts.draws.unwrap_or(20), opts.seed)],
        "theorems5-7" => vec![integer_theorems()],
        "gauss" => vec![gauss_limit()],
        "specfun" => vec![specfun_contracts(opts.draws.unwrap_or(1000), opts.seed)],
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown suite `{other}`; known suites: {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corollary_parameter_maps() {
        assert_eq!(corollary2_params(0.5, 0.5, 0.5).unwrap(), corollary1_params());
        assert_eq!(corollary1_params().s_exponent(), 0.0);
        let p = corollary2_params(0.3, 0.5, 0.7).unwrap();
        assert!(p.s_exponent().abs() < 1e-15);
        assert!(corollary2_params(0.2, 0.3, 0.4).is_err());
    }

    #[test]
    fn corollary_right_sides_agree_at_half() {
        for m in [3usize, 10, 1000] {
            let c1: f64 = corollary1_rhs(m).unwrap();
            let c2: f64 = corollary2_rhs(0.5, 0.5, 0.5, m).unwrap();
            assert!((c1 - c2).abs() < 1e-13, "m={m}: {c1} vs {c2}");
        }
    }

    #[test]
    fn relative_gap_cases() {
        let one = SignedLog::<f64>::from_value(1.0);
        let near = SignedLog::<f64>::from_value(1.0 + 1e-13);
        assert!((relative_gap(one, near) - 1e-13).abs() < 1e-16);
        assert_eq!(relative_gap(SignedLog::<f64>::zero(), SignedLog::zero()), 0.0);
        assert_eq!(relative_gap(one, SignedLog::zero()), 1.0);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", &SuiteOptions::default()).is_err());
    }

    #[test]
    fn sin_pi_reduction() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert!((sin_pi(2.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-0.5) + 1.0).abs() < 1e-16);
    }
}
