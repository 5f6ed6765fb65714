//! The coefficient family A_k^(p).
//!
//! For general p the coefficients are the nested sums
//!
//! ```text
//!   A_k = Σ_{k = k_1 >= k_2 >= … >= k_{p-1} >= k_p = 0}
//!         Π_{j=1}^{p-1} (B_j + k_{j+1})_{k_j - k_{j+1}} (b_j - a_{j+2})_{k_j - k_{j+1}}
//!                       / (k_j - k_{j+1})!
//!   B_j = Σ_{i=j+1}^{p} b_i − Σ_{i=j+2}^{p+1} a_i
//! ```
//!
//! evaluated as p−1 convolution layers (innermost first). Values are stored
//! scaled by 1/k!, which keeps them of moderate size: A_k itself grows like
//! Γ(k) times a power of k and overflows a double long before k = 200.
//!
//! The layered form reproduces the printed p = 2, 3, 4 sums term by term.
//! For p >= 5 it follows the same pattern and is checked only for internal
//! consistency (pattern-extrapolated).

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::params::SeriesParams;
use crate::real::Real;
use crate::specfun::{ln_gamma_signed, pochhammer, SignedLog};

/// A_0..A_K for one parameter set, stored as A_k / k!.
#[derive(Debug, Clone)]
pub struct AkTable<T> {
    p: usize,
    scaled: Vec<T>,
}

impl<T: Real> AkTable<T> {
    pub fn p(&self) -> usize {
        self.p
    }

    /// Largest available index K.
    pub fn k_max(&self) -> usize {
        self.scaled.len() - 1
    }

    /// A_k / k!
    pub fn scaled(&self, k: usize) -> T {
        self.scaled[k]
    }

    pub fn scaled_values(&self) -> &[T] {
        &self.scaled
    }

    /// A_k in signed-log form.
    pub fn value(&self, k: usize) -> SignedLog<T> {
        let s = SignedLog::from_value(self.scaled[k]);
        if s.is_zero() {
            return s;
        }
        let fact = ln_gamma_signed(T::from_usize(k + 1)).expect("k+1 is positive");
        s * fact
    }

    /// A_k as a plain number (finite for the small k used in finite sums).
    pub fn plain(&self, k: usize) -> T {
        let mut v = self.scaled[k];
        for i in 2..=k {
            v *= T::from_usize(i);
        }
        v
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Compensated<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Compensated<T> {
    pub(crate) fn new() -> Self {
        Compensated {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub(crate) fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Builds A_0..A_K by successive convolution layers.
pub fn ak_table_nested<T: Real>(params: &SeriesParams, k_max: usize) -> AkTable<T> {
    let p = params.p();
    let a: Vec<T> = params.a().iter().map(|&x| T::from_f64(x)).collect();
    let b: Vec<T> = params.b().iter().map(|&x| T::from_f64(x)).collect();
    let mut f = vec![T::zero(); k_max + 1];
    f[0] = T::one();
    // layer j (1-based) maps f_{j+1}(k_{j+1}) to f_j(k_j); the innermost
    // layer j = p-1 starts from the delta at k_p = 0
    for j in (1..p).rev() {
        let big_b = b[j..p].iter().fold(T::zero(), |s, &x| s + x)
            - a[j + 1..=p].iter().fold(T::zero(), |s, &x| s + x);
        let c = b[j - 1] - a[j + 1];
        let mut acc = vec![Compensated::new(); k_max + 1];
        for (kk, &fk) in f.iter().enumerate() {
            if fk == T::zero() {
                continue;
            }
            // W(kk, d) = (B+kk)_d (c)_d kk! / (d! (kk+d)!)
            let mut w = T::one();
            let base = big_b + T::from_usize(kk);
            for d in 0..=(k_max - kk) {
                acc[kk + d].add(w * fk);
                let df = T::from_usize(d);
                w = w * (base + df) * (c + df) / ((T::from_usize(kk + 1) + df) * (df + T::one()));
                if w == T::zero() {
                    break;
                }
            }
        }
        f = acc.iter().map(Compensated::value).collect();
    }
    AkTable { p, scaled: f }
}

/// Which of the two printed alternative representations to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltVariant {
    First,
    Second,
}

const DEGENERATE_TOL: f64 = 1e-12;

/// Terminating 3F2(num_0, num_1, −n; den_0, den_1; 1).
fn terminating_3f2<T: Real>(num: [T; 2], n: usize, den: [T; 2]) -> Result<T> {
    let mut sum = Compensated::new();
    let mut term = T::one();
    sum.add(term);
    for l in 0..n {
        let lf = T::from_usize(l);
        let d0 = den[0] + lf;
        let d1 = den[1] + lf;
        if d0.abs().to_f64() < DEGENERATE_TOL || d1.abs().to_f64() < DEGENERATE_TOL {
            return Err(Error::DegenerateRepresentation(format!(
                "denominator Pochhammer of terminating 3F2 vanishes at l = {}",
                l + 1
            )));
        }
        term = term * (num[0] + lf) * (num[1] + lf) * (lf - T::from_usize(n))
            / (d0 * d1 * (lf + T::one()));
        sum.add(term);
    }
    Ok(sum.value())
}

/// (x)_k (y)_k / k! in signed-log form.
fn prefactor<T: Real>(x: T, y: T, k: usize) -> SignedLog<T> {
    let fact = ln_gamma_signed(T::from_usize(k + 1)).expect("positive");
    pochhammer(x, k) * pochhammer(y, k) / fact
}

fn require_p(params: &SeriesParams, p: usize) -> Result<()> {
    if params.p() != p {
        return Err(Error::Domain(format!(
            "representation needs p = {p}, parameters have p = {}",
            params.p()
        )));
    }
    Ok(())
}

fn times<T: Real>(pre: SignedLog<T>, sum: T) -> SignedLog<T> {
    if pre.is_zero() {
        return pre;
    }
    pre * SignedLog::from_value(sum)
}

/// A_k^(3) through a single terminating 3F2.
pub fn ak3_alt<T: Real>(params: &SeriesParams, k: usize, variant: AltVariant) -> Result<SignedLog<T>> {
    require_p(params, 3)?;
    let a: Vec<T> = params.a().iter().map(|&x| T::from_f64(x)).collect();
    let b: Vec<T> = params.b().iter().map(|&x| T::from_f64(x)).collect();
    let one = T::one();
    let kf = T::from_usize(k);
    match variant {
        AltVariant::First => {
            let g = b[2] + b[1] - a[3] - a[2];
            let pre = prefactor(g, b[0] - a[2], k);
            let sum = terminating_3f2([b[2] - a[3], b[1] - a[3]], k, [g, one + a[2] - b[0] - kf])?;
            Ok(times(pre, sum))
        }
        AltVariant::Second => {
            let g1 = b[0] + b[2] - a[2] - a[3];
            let g2 = b[1] + b[2] - a[2] - a[3];
            let pre = prefactor(g1, g2, k);
            let sum = terminating_3f2([b[2] - a[2], b[2] - a[3]], k, [g1, g2])?;
            Ok(times(pre, sum))
        }
    }
}

/// A_k^(4) through an outer finite sum of terminating 3F2s.
pub fn ak4_alt<T: Real>(params: &SeriesParams, k: usize, variant: AltVariant) -> Result<SignedLog<T>> {
    require_p(params, 4)?;
    let a: Vec<T> = params.a().iter().map(|&x| T::from_f64(x)).collect();
    let b: Vec<T> = params.b().iter().map(|&x| T::from_f64(x)).collect();
    let one = T::one();
    let kf = T::from_usize(k);
    // outer sum Σ_l (α)_l (β)_l (−k)_l / ((γ)_l (δ)_l l!) · inner(l)
    let outer = |alpha: T, beta: T, gamma: T, delta_of_k: T, inner: &dyn Fn(usize) -> Result<T>| -> Result<T> {
        let mut sum = Compensated::new();
        let mut coef = T::one();
        for l in 0..=k {
            if l > 0 {
                let lf = T::from_usize(l - 1);
                let d0 = gamma + lf;
                let d1 = delta_of_k + lf;
                if d0.abs().to_f64() < DEGENERATE_TOL || d1.abs().to_f64() < DEGENERATE_TOL {
                    return Err(Error::DegenerateRepresentation(format!(
                        "outer denominator Pochhammer vanishes at l = {l}"
                    )));
                }
                coef = coef * (alpha + lf) * (beta + lf) * (lf - kf) / (d0 * d1 * (lf + one));
            }
            if coef == T::zero() {
                break;
            }
            sum.add(coef * inner(l)?);
        }
        Ok(sum.value())
    };
    match variant {
        AltVariant::First => {
            let g = b[3] + b[2] + b[1] - a[4] - a[3] - a[2];
            let pre = prefactor(g, b[0] - a[2], k);
            let inner = |l: usize| {
                let lf = T::from_usize(l);
                terminating_3f2(
                    [b[3] - a[4], b[2] - a[4]],
                    l,
                    [b[3] + b[2] - a[4] - a[3], one + a[3] - b[1] - lf],
                )
            };
            let sum = outer(
                b[3] + b[2] - a[4] - a[3],
                b[1] - a[3],
                g,
                one + a[2] - b[0] - kf,
                &inner,
            )?;
            Ok(times(pre, sum))
        }
        AltVariant::Second => {
            let g1 = b[0] + b[2] + b[3] - a[2] - a[3] - a[4];
            let g2 = b[1] + b[2] + b[3] - a[2] - a[3] - a[4];
            let pre = prefactor(g1, g2, k);
            let inner = |l: usize| {
                terminating_3f2(
                    [b[2] - a[4], b[3] - a[4]],
                    l,
                    [b[2] + b[3] - a[2] - a[4], b[2] + b[3] - a[3] - a[4]],
                )
            };
            let sum = outer(
                b[2] + b[3] - a[2] - a[4],
                b[2] + b[3] - a[3] - a[4],
                g1,
                g2,
                &inner,
            )?;
            Ok(times(pre, sum))
        }
    }
}

/// Thread-safe cache of A_k tables keyed by parameter bits.
///
/// A request for K entries returns any cached table that is at least that
/// long; otherwise the table is rebuilt at `max(K, 2 * cached K)`.
#[derive(Debug, Default)]
pub struct AkCache<T> {
    tables: RwLock<HashMap<Vec<u64>, Arc<AkTable<T>>>>,
}

impl<T: Real> AkCache<T> {
    pub fn new() -> Self {
        AkCache {
            tables: RwLock::new(HashMap::new()),
        }
    }

    pub fn get(&self, params: &SeriesParams, k_max: usize) -> Arc<AkTable<T>> {
        let key = params.key();
        let cached_len = {
            let guard = self.tables.read().expect("cache lock poisoned");
            match guard.get(&key) {
                Some(t) if t.k_max() >= k_max => return Arc::clone(t),
                Some(t) => t.k_max(),
                None => 0,
            }
        };
        let target = k_max.max(2 * cached_len);
        let table = Arc::new(ak_table_nested::<T>(params, target));
        self.tables
            .write()
            .expect("cache lock poisoned")
            .insert(key, Arc::clone(&table));
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: &[f64], b: &[f64]) -> SeriesParams {
        SeriesParams::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn p1_convention() {
        let t = ak_table_nested::<f64>(&params(&[0.3, 0.4], &[1.2]), 5);
        assert_eq!(t.scaled_values(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn p2_first_coefficient() {
        let t = ak_table_nested::<f64>(&params(&[0.5, 0.5, 0.5], &[1.0, 1.0]), 3);
        assert_eq!(t.plain(0), 1.0);
        assert!((t.plain(1) - 0.25).abs() < 1e-16);
    }

    #[test]
    fn p2_vanishes_when_b1_equals_a3() {
        let t = ak_table_nested::<f64>(&params(&[0.3, 0.6, 0.8], &[0.8, 1.7]), 10);
        assert!(t.scaled_values()[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn zero_balanced_5f4_low_coefficients() {
        // A_1 = 0 and A_2 = -1/32 for a = (1/2,1/2,1/2,1/2,5/4), b = (1,1,1,1/4)
        let t = ak_table_nested::<f64>(&params(&[0.5, 0.5, 0.5, 0.5, 1.25], &[1.0, 1.0, 1.0, 0.25]), 4);
        assert_eq!(t.plain(1), 0.0);
        assert!((t.plain(2) + 1.0 / 32.0).abs() < 1e-17);
    }

    #[test]
    fn alt_reps_at_k_zero() {
        let p3 = params(&[0.3, 0.4, 0.5, 0.6], &[1.0, 1.1, 1.2]);
        for v in [AltVariant::First, AltVariant::Second] {
            assert!((ak3_alt::<f64>(&p3, 0, v).unwrap().value() - 1.0).abs() < 1e-15);
        }
        let p4 = params(&[0.3, 0.4, 0.5, 0.6, 0.7], &[1.0, 1.1, 1.2, 1.3]);
        for v in [AltVariant::First, AltVariant::Second] {
            assert!((ak4_alt::<f64>(&p4, 0, v).unwrap().value() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_first_representation() {
        // b_1 - a_3 = 0 puts a zero into (1 + a_3 - b_1 - k)_l
        let p3 = params(&[0.3, 0.4, 0.5, 0.6], &[0.5, 1.1, 1.2]);
        assert!(matches!(
            ak3_alt::<f64>(&p3, 3, AltVariant::First),
            Err(Error::DegenerateRepresentation(_))
        ));
        assert!(ak3_alt::<f64>(&p3, 3, AltVariant::Second).is_ok());
        assert!(ak3_alt::<f64>(&p3, 3, AltVariant::Second).is_ok());
        let wrong_p = params(&[0.3, 0.4, 0.5], &[1.0, 1.1]);
        assert!(matches!(ak3_alt::<f64>(&wrong_p, 1, AltVariant::First), Err(Error::Domain(_))));
    }

    #[test]
    fn cache_reuses_longer_tables() {
        let cache = AkCache::<f64>::new();
        let p = params(&[0.3, 0.4, 0.5, 0.6], &[1.0, 1.1, 1.2]);
        let t1 = cache.get(&p, 40);
        assert_eq!(t1.k_max(), 40);
        let t2 = cache.get(&p, 20);
        assert!(Arc::ptr_eq(&t1, &t2));
        let t3 = cache.get(&p, 50);
        assert_eq!(t3.k_max(), 80);
        assert_eq!(t3.scaled(17), t1.scaled(17));
    }
}
