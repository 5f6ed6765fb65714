//! Browser bindings. Every export returns a JSON string; errors come back
//! as `{"error": "..."}` so the page can show them inline.

use hypsum::asymptotics::fit_slope;
use hypsum::coefficients::ak_table_nested;
use hypsum::verify::{corollary2_params, corollary2_rhs};
use hypsum::{evaluate_many, DoubleDouble, EvalOptions, EvalReport, SeriesParams};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("cannot parse `{t}`")))
        .collect()
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

#[derive(Serialize)]
struct Study {
    s: f64,
    rows: Vec<EvalReport>,
    slope: Option<f64>,
    predicted_slope: f64,
}

fn study(a: &str, b: &str, start: u32, count: u32, n_order: i32) -> Result<Study, String> {
    let params = SeriesParams::new(parse_list(a)?, parse_list(b)?).map_err(|e| e.to_string())?;
    if start == 0 || !(2..=12).contains(&count) {
        return Err("need start >= 1 and 2 <= points <= 12".into());
    }
    let ms: Vec<usize> = (0..count).map(|k| (start as usize) << k).collect();
    let opts = EvalOptions {
        n_order: usize::try_from(n_order).ok(),
        precision: hypsum::asymptotics::Precision::DoubleDouble,
        ctl: hypsum::TailControl {
            rel_tol: 1e-18,
            ..Default::default()
        },
        ..EvalOptions::default()
    };
    let rows = evaluate_many(&params, &ms, &opts).map_err(|e| e.to_string())?;
    let residuals: Vec<f64> = rows.iter().map(|r| r.residual).collect();
    Ok(Study {
        s: params.s_exponent(),
        slope: fit_slope(&ms, &residuals).ok(),
        predicted_slope: -rows[0].predicted_order,
        rows,
    })
}

/// Residuals of the dispatched expansion on the grid `start·2^k`, k < count.
/// `n_order < 0` keeps the default truncation order.
#[wasm_bindgen]
pub fn residual_study(a: &str, b: &str, start: u32, count: u32, n_order: i32) -> String {
    to_json(study(a, b, start, count, n_order))
}

#[derive(Serialize)]
struct AkRows {
    k: Vec<usize>,
    value: Vec<f64>,
}

/// A_0..A_k for the given parameters.
#[wasm_bindgen]
pub fn ak_table(a: &str, b: &str, k: u32) -> String {
    let run = || -> Result<AkRows, String> {
        let params = SeriesParams::new(parse_list(a)?, parse_list(b)?).map_err(|e| e.to_string())?;
        let k = (k as usize).min(200);
        let t = ak_table_nested::<DoubleDouble>(&params, k);
        Ok(AkRows {
            k: (0..=k).collect(),
            value: (0..=k).map(|i| t.plain(i).hi()).collect(),
        })
    };
    to_json(run())
}

#[derive(Serialize)]
struct Corollary {
    m: Vec<usize>,
    direct: Vec<f64>,
    closed_form: Vec<f64>,
    residual: Vec<f64>,
    slope: Option<f64>,
}

/// Direct sums of the three-parameter zero-balanced 5F4 against its closed form.
#[wasm_bindgen]
pub fn corollary2(a: f64, b: f64, c: f64, start: u32, count: u32) -> String {
    let run = || -> Result<Corollary, String> {
        let params = corollary2_params(a, b, c).map_err(|e| e.to_string())?;
        if start < 3 || !(2..=12).contains(&count) {
            return Err("need start >= 3 and 2 <= points <= 12".into());
        }
        let ms: Vec<usize> = (0..count).map(|k| (start as usize) << k).collect();
        let mut out = Corollary {
            m: ms.clone(),
            direct: Vec::new(),
            closed_form: Vec::new(),
            residual: Vec::new(),
            slope: None,
        };
        for &m in &ms {
            let d: DoubleDouble =
                hypsum::asymptotics::direct_partial_sum_in(&params, m).map_err(|e| e.to_string())?;
            let r: DoubleDouble = corollary2_rhs(a, b, c, m).map_err(|e| e.to_string())?;
            out.direct.push(d.hi());
            out.closed_form.push(r.hi());
            out.residual.push((d - r).hi());
        }
        out.slope = fit_slope(&ms, &out.residual).ok();
        Ok(out)
    };
    to_json(run())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn study_reports_slope() {
        let v: serde_json::Value =
            serde_json::from_str(&residual_study("0.5,0.7", "1.9", 200, 6, 1)).unwrap();
        let slope = v["slope"].as_f64().unwrap();
        assert!((slope + 2.7).abs() < 0.05, "{slope}");
        assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn errors_are_json() {
        let v: serde_json::Value =
            serde_json::from_str(&residual_study("0.5,zz", "1.9", 200, 6, -1)).unwrap();
        assert!(v["error"].as_str().unwrap().contains("zz"));
        let v: serde_json::Value = serde_json::from_str(&corollary2(0.1, 0.2, 0.3, 100, 6)).unwrap();
        assert!(v["error"].is_string());
    }

    #[test]
    fn ak_and_corollary() {
        let v: serde_json::Value = serde_json::from_str(&ak_table("0.5,0.5,0.5", "1,1", 3)).unwrap();
        assert_eq!(v["value"][0], 1.0);
        assert!((v["value"][1].as_f64().unwrap() - 0.25).abs() < 1e-15);
        let v: serde_json::Value = serde_json::from_str(&corollary2(0.3, 0.5, 0.7, 100, 6)).unwrap();
        assert!((v["slope"].as_f64().unwrap() + 3.0).abs() < 0.1);
    }
}
