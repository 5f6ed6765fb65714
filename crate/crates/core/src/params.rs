//! Series parameters, validation, and classification of the exponent s.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::is_gamma_pole;

/// Default tolerance for deciding that s is an integer.
pub const DEFAULT_EPS_INT: f64 = 1e-9;

/// Upper parameters `a_1..a_{p+1}` and lower parameters `b_1..b_p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesParams {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl SeriesParams {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::InvalidParams("need at least one lower parameter".into()));
        }
        if a.len() != b.len() + 1 {
            return Err(Error::InvalidParams(format!(
                "expected {} upper parameters for {} lower ones, got {}",
                b.len() + 1,
                b.len(),
                a.len()
            )));
        }
        for (i, &x) in a.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidParams(format!("a_{} = {x} is not finite", i + 1)));
            }
            if is_gamma_pole(x) {
                return Err(Error::InvalidParams(format!(
                    "a_{} = {x} is a non-positive integer (terminating series)",
                    i + 1
                )));
            }
        }
        for (j, &x) in b.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidParams(format!("b_{} = {x} is not finite", j + 1)));
            }
            if is_gamma_pole(x) {
                return Err(Error::InvalidParams(format!(
                    "b_{} = {x} is a non-positive integer",
                    j + 1
                )));
            }
        }
        Ok(SeriesParams { a, b })
    }

    /// Parses `"a=0.5,0.7 b=1.9"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut a = None;
        let mut b = None;
        for token in spec.split_whitespace() {
            let (key, list) = token
                .split_once('=')
                .ok_or_else(|| Error::InvalidParams(format!("expected key=list, got `{token}`")))?;
            let values = parse_list(list)?;
            match key {
                "a" => a = Some(values),
                "b" => b = Some(values),
                other => {
                    return Err(Error::InvalidParams(format!("unknown parameter list `{other}`")))
                }
            }
        }
        match (a, b) {
            (Some(a), Some(b)) => Self::new(a, b),
            _ => Err(Error::InvalidParams("both a= and b= lists are required".into())),
        }
    }

    /// The `p` of `_{p+1}F_p`.
    pub fn p(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// s = Σ b_j − Σ a_i.
    pub fn s_exponent(&self) -> f64 {
        self.b.iter().sum::<f64>() - self.a.iter().sum::<f64>()
    }

    pub fn classify(&self, eps_int: f64) -> SpClass {
        classify(self.s_exponent(), eps_int)
    }

    /// The infinite sums over k converge when `a_j > 0` for `j >= 3`.
    pub fn convergence_ok(&self) -> bool {
        self.a.iter().skip(2).all(|&x| x > 0.0)
    }

    pub fn check_convergence(&self) -> Result<()> {
        match self.a.iter().enumerate().skip(2).find(|(_, &x)| x <= 0.0) {
            Some((i, &x)) => Err(Error::Convergence {
                index: i + 1,
                value: x,
            }),
            None => Ok(()),
        }
    }

    /// Exponents `a_3..a_{p+1}` governing the algebraic decay of the k-series
    /// terms (each term behaves like a combination of `k^{-1-a_j}`).
    pub fn tail_exponents(&self) -> Vec<f64> {
        self.a.iter().skip(2).copied().collect()
    }

    /// Cache key made of the raw bit patterns.
    pub(crate) fn key(&self) -> Vec<u64> {
        self.a
            .iter()
            .chain(self.b.iter())
            .map(|x| x.to_bits())
            .collect()
    }
}

impl fmt::Display for SeriesParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "a={} b={}", join(&self.a), join(&self.b))
    }
}

/// Parses a comma-separated list of decimal literals.
pub fn parse_list(list: &str) -> Result<Vec<f64>> {
    if list.trim().is_empty() {
        return Err(Error::InvalidParams("empty parameter list".into()));
    }
    list.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::InvalidParams(format!("cannot parse `{tok}` as a number")))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpTag {
    NonInteger,
    Zero,
    PositiveInteger,
    NegativeInteger,
}

/// Classification of s: which expansion applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpClass {
    pub tag: SpTag,
    /// |s| rounded, for the integer tags; 0 otherwise.
    pub t: u32,
    pub s: f64,
}

pub fn classify(s: f64, eps_int: f64) -> SpClass {
    let nearest = s.round();
    let (tag, t) = if (s - nearest).abs() > eps_int || !s.is_finite() {
        (SpTag::NonInteger, 0)
    } else if nearest == 0.0 {
        (SpTag::Zero, 0)
    } else if nearest > 0.0 {
        (SpTag::PositiveInteger, nearest as u32)
    } else {
        (SpTag::NegativeInteger, (-nearest) as u32)
    };
    SpClass { tag, t, s }
}
