use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A gamma-function argument sits on (or within 1e-12 of) a
    /// non-positive integer.
    #[error("gamma pole at argument {0}")]
    Pole(f64),

    /// An infinite k-series needs `a_j > 0` for `j >= 3`.
    #[error("series over k diverges: a_{index} = {value} must be positive")]
    Convergence { index: usize, value: f64 },

    #[error("series `{series}` missed its tolerance: tail bound {bound:e} on value {value:e} after {terms} terms")]
    Tail {
        series: &'static str,
        value: f64,
        bound: f64,
        terms: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// A finite 3F2 inside an alternative A_k representation has a
    /// vanishing denominator Pochhammer symbol.
    #[error("degenerate representation: {0}")]
    DegenerateRepresentation(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
