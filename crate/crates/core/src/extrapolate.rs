//! Richardson extrapolation with prescribed exponents.
//!
//! Partial sums of a series whose terms decay like Σ_j c_j k^{-1-e_j}(1 +
//! O(1/k)) approach their limit as
//!
//! ```text
//!   S_K = S + Σ_j K^{-e_j} (d_j0 + d_j1/K + d_j2/K² + …)
//! ```
//!
//! with an extra `ln K` factor for every coincidence among the exponents
//! `e_j + r`. Given partial sums on a geometric grid of K the model is
//! solved exactly for S.

use crate::real::Real;

/// Exponents closer than this are treated as coincident.
const MERGE_TOL: f64 = 1e-9;

/// One correction function `K^{-exponent} ln^{log_power} K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFn {
    pub exponent: f64,
    pub log_power: u32,
}

impl BasisFn {
    fn eval<T: Real>(&self, k: f64) -> T {
        let lk = T::from_f64(k).ln();
        let mut v = (-T::from_f64(self.exponent) * lk).exp();
        for _ in 0..self.log_power {
            v *= lk;
        }
        v
    }
}

/// The `count` slowest-decaying correction functions for leading exponents
/// `exponents` and all their integer shifts.
pub fn basis_for(exponents: &[f64], count: usize) -> Vec<BasisFn> {
    if exponents.is_empty() || count == 0 {
        return Vec::new();
    }
    let mut candidates: Vec<f64> = Vec::new();
    for &e in exponents {
        for r in 0..=count {
            candidates.push(e + r as f64);
        }
    }
    candidates.sort_by(|x, y| x.partial_cmp(y).expect("finite exponents"));
    let mut groups: Vec<(f64, u32)> = Vec::new();
    for e in candidates {
        match groups.last_mut() {
            Some((g, mult)) if (e - *g).abs() <= MERGE_TOL => *mult += 1,
            _ => groups.push((e, 1)),
        }
    }
    let mut out = Vec::with_capacity(count);
    'outer: for (e, mult) in groups {
        for q in (0..mult).rev() {
            if out.len() == count {
                break 'outer;
            }
            out.push(BasisFn {
                exponent: e,
                log_power: q,
            });
        }
    }
    out
}

/// Solves `S_i = S + Σ_j c_j φ_j(K_i)` for S with one equation per point.
///
/// `ks.len()` must equal `basis.len() + 1`.
pub fn extrapolate<T: Real>(ks: &[f64], sums: &[T], basis: &[BasisFn]) -> T {
    let n = ks.len();
    assert_eq!(n, sums.len());
    assert_eq!(n, basis.len() + 1, "need one more point than basis functions");
    // rows: [1, φ_1(K_i), …, φ_{n-1}(K_i) | S_i], columns scaled by their
    // value at the largest K to keep entries comparable
    let kref = ks.iter().cloned().fold(f64::MIN, f64::max);
    let scales: Vec<T> = basis.iter().map(|b| b.eval::<T>(kref)).collect();
    let mut m: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(n + 1);
            row.push(T::one());
            for (b, &sc) in basis.iter().zip(&scales) {
                row.push(b.eval::<T>(ks[i]) / sc);
            }
            row.push(sums[i]);
            row
        })
        .collect();
    gaussian_solve_first(&mut m)
}

/// Gaussian elimination with partial pivoting; returns the first unknown.
fn gaussian_solve_first<T: Real>(m: &mut [Vec<T>]) -> T {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m[i][col]
                    .abs()
                    .partial_cmp(&m[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty");
        m.swap(col, pivot);
        let p = m[col][col];
        if p == T::zero() {
            continue;
        }
        for row in (col + 1)..n {
            let f = m[row][col] / p;
            if f == T::zero() {
                continue;
            }
            for c in col..=n {
                let v = m[col][c];
                m[row][c] -= f * v;
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for c in (row + 1)..n {
            acc -= m[row][c] * x[c];
        }
        x[row] = if m[row][row] == T::zero() {
            T::zero()
        } else {
            acc / m[row][row]
        };
    }
    x[0]
}
