//! Frozen high-precision reference values; see oracle/generate.py.

use hypsum::asymptotics::direct_partial_sum_in;
use hypsum::coefficients::{ak_table_nested, AkCache};
use hypsum::continuation::{
    d0_const, e_coeff, g0_const, g_singular, h_coeff, l0_const, q_coeff, u0_const, v_coeff,
    TailControl,
};
use hypsum::specfun::{digamma, ln_gamma_signed};
use hypsum::{DoubleDouble, Real, SeriesParams};
use serde::Deserialize;

#[derive(Deserialize)]
struct Values {
    finite: Vec<Finite>,
    series: Vec<Series>,
    ak: Vec<Ak>,
    specfun: Vec<Special>,
    direct: Vec<Direct>,
}

#[derive(Deserialize)]
struct Finite {
    kind: String,
    a: Vec<f64>,
    b: Vec<f64>,
    t: u32,
    n: usize,
    value: String,
}

#[derive(Deserialize)]
struct Series {
    kind: String,
    a: Vec<f64>,
    b: Vec<f64>,
    t: u32,
    value: String,
}

#[derive(Deserialize)]
struct Ak {
    a: Vec<f64>,
    b: Vec<f64>,
    k: usize,
    value: String,
}

#[derive(Deserialize)]
struct Special {
    kind: String,
    x: f64,
    value: String,
    sign: i8,
}

#[derive(Deserialize)]
struct Direct {
    a: Vec<f64>,
    b: Vec<f64>,
    m: usize,
    value: String,
}

fn values() -> Values {
    serde_json::from_str(include_str!("oracle/values.json")).expect("valid oracle file")
}

fn num(s: &str) -> f64 {
    s.parse().expect("decimal literal")
}

fn rel(x: f64, y: f64) -> f64 {
    if y == 0.0 {
        x.abs()
    } else {
        ((x - y) / y).abs()
    }
}

fn params(a: &[f64], b: &[f64]) -> SeriesParams {
    SeriesParams::new(a.to_vec(), b.to_vec()).unwrap()
}

fn finite_value<T: Real>(c: &Finite) -> f64 {
    let p = params(&c.a, &c.b);
    let cache = AkCache::<T>::new();
    let v = match c.kind.as_str() {
        "g_singular" => g_singular(&p, c.n, &cache),
        "e" => e_coeff(&p, c.n, &cache),
        "q" => q_coeff(&p, c.t, c.n, &cache),
        "h" => h_coeff(&p, c.t, c.n, &cache),
        "v" => v_coeff(&p, c.t, c.n, &cache),
        other => panic!("unknown kind {other}"),
    };
    v.unwrap_or_else(|e| panic!("{} {:?} {:?}: {e}", c.kind, c.a, c.b)).to_f64()
}

#[test]
fn finite_inner_sums_match_oracle() {
    let mut worst = (0.0, String::new());
    for c in values().finite {
        let err = rel(finite_value::<f64>(&c), num(&c.value));
        if err > worst.0 {
            worst = (err, format!("{} t={} n={} a={:?} b={:?}", c.kind, c.t, c.n, c.a, c.b));
        }
    }
    assert!(worst.0 <= 1e-12, "worst {:.3e} at {}", worst.0, worst.1);
}

#[test]
fn finite_inner_sums_in_double_double() {
    for c in values().finite {
        // s enters through its f64 value, so Γ(−s−n) carries ~1e-16 of noise
        let err = rel(finite_value::<DoubleDouble>(&c), num(&c.value));
        assert!(err <= 1e-14, "{} {:?} {:?}: {err:e}", c.kind, c.a, c.b);
    }
}

#[test]
fn infinite_sums_match_oracle() {
    let ctl = TailControl::default();
    for c in values().series {
        let p = params(&c.a, &c.b);
        let cache = AkCache::<f64>::new();
        let got = match c.kind.as_str() {
            "g0" => g0_const(&p, &ctl, &cache),
            "l0" => l0_const(&p, c.t, &ctl, &cache),
            "d0" => d0_const(&p, &ctl, &cache),
            "u0" => u0_const(&p, c.t, &ctl, &cache),
            other => panic!("unknown kind {other}"),
        }
        .unwrap_or_else(|e| panic!("{} {:?} {:?}: {e}", c.kind, c.a, c.b));
        let want = num(&c.value);
        let err = (got.value - want).abs();
        assert!(
            err <= 1e-12 * want.abs().max(1.0),
            "{} {:?} {:?}: got {} want {want} (bound {:e})",
            c.kind,
            c.a,
            c.b,
            got.value,
            got.tail_bound
        );
        // the reported bound must cover the actual error, with rounding slack
        assert!(err <= 10.0 * got.tail_bound + 1e-14 * want.abs(), "{}: err {err:e} bound {:e}", c.kind, got.tail_bound);
    }
}

#[test]
fn ak_matches_printed_nested_sums() {
    for c in values().ak {
        let p = params(&c.a, &c.b);
        let t = ak_table_nested::<f64>(&p, c.k);
        let want = num(&c.value);
        assert!(rel(t.plain(c.k), want) <= 1e-13, "p={} k={}: {} vs {want}", p.p(), c.k, t.plain(c.k));
    }
}

#[test]
fn special_functions_match_oracle() {
    for c in values().specfun {
        let want = num(&c.value);
        match c.kind.as_str() {
            "lgamma" => {
                let g = ln_gamma_signed(c.x).unwrap();
                assert_eq!(g.sign, c.sign, "sign of gamma({})", c.x);
                assert!((g.log_abs - want).abs() <= 1e-13 * want.abs().max(1.0), "lgamma({}) = {} vs {want}", c.x, g.log_abs);
            }
            "digamma" => {
                let d = digamma(c.x).unwrap();
                assert!((d - want).abs() <= 1e-13 * want.abs().max(1.0), "digamma({}) = {d} vs {want}", c.x);
            }
            other => panic!("unknown kind {other}"),
        }
    }
}

#[test]
fn direct_sums_match_oracle() {
    for c in values().direct {
        let p = params(&c.a, &c.b);
        let want = num(&c.value);
        let got: f64 = direct_partial_sum_in(&p, c.m).unwrap();
        assert!(rel(got, want) <= 1e-13, "m={}: {got} vs {want}", c.m);
        let got_dd: DoubleDouble = direct_partial_sum_in(&p, c.m).unwrap();
        assert!(rel(got_dd.to_f64(), want) <= 1e-16, "dd m={}", c.m);
    }
}
