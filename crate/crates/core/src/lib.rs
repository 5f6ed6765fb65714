//! Partial sums of generalized hypergeometric series of unit argument.
//!
//! The crate evaluates
//!
//! ```text
//!   S(m) = Σ_{l=0}^{m-1} Γ(a_1+l)⋯Γ(a_{p+1}+l) / (Γ(b_1+l)⋯Γ(b_p+l) Γ(1+l))
//! ```
//!
//! by direct summation and reproduces its large-m behaviour through explicit
//! asymptotic expansions, one per class of the exponent
//! `s = Σ b_j − Σ a_i` (non-integer, zero, positive integer, negative
//! integer). All numerical kernels are generic over [`Real`], so the same
//! code runs in `f64` and in [`DoubleDouble`].

pub mod asymptotics;
pub mod coefficients;
pub mod continuation;
pub mod dd;
pub mod error;
pub mod extrapolate;
pub mod params;
pub mod real;
pub mod specfun;
pub mod verify;

pub use asymptotics::{
    direct_partial_sum, evaluate, evaluate_many, AsymptoticExpansion, AsymptoticResult, EvalOptions, EvalReport,
    Theorem,
};
pub use coefficients::AkTable;
pub use continuation::TailControl;
pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use params::{SeriesParams, SpClass, SpTag};
pub use real::Real;
pub use specfun::SignedLog;
