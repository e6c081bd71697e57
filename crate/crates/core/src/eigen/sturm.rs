//! Sturm-sequence counting and bisection for symmetric tridiagonal matrices.

use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 200;

/// Symmetric tridiagonal matrix prepared for repeated Sturm counts.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    diag: Vec<f64>,
    off_sq: Vec<f64>,
    pivmin: f64,
    lower: f64,
    upper: f64,
}

impl Tridiagonal {
    pub fn new(diag: &[f64], off: &[f64]) -> Self {
        assert!(!diag.is_empty());
        assert_eq!(off.len() + 1, diag.len());
        let off_sq: Vec<f64> = off.iter().map(|e| e * e).collect();
        let max_sq = off_sq.iter().copied().fold(1.0, f64::max);
        let pivmin = f64::MIN_POSITIVE * max_sq;
        let n = diag.len();
        let mut lower = f64::INFINITY;
        let mut upper = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { off[i].abs() } else { 0.0 };
            lower = lower.min(diag[i] - left - right);
            upper = upper.max(diag[i] + left + right);
        }
        let pad = 2.0 * f64::EPSILON * lower.abs().max(upper.abs()) + 2.0 * pivmin;
        Self {
            diag: diag.to_vec(),
            off_sq,
            pivmin,
            lower: lower - pad,
            upper: upper + pad,
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - sigma;
        if q.abs() <= self.pivmin {
            q = -self.pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            q = self.diag[i] - sigma - self.off_sq[i - 1] / q;
            if q.abs() <= self.pivmin {
                q = -self.pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based): the smallest float `x` whose
    /// Sturm count exceeds `k`, found by bisecting the ordered
    /// bit patterns of the Gershgorin interval (at most 64 steps).
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        assert!(k < self.dim());
        let mut lo = ordered(self.lower);
        let mut hi = ordered(self.upper);
        for _ in 0..MAX_BISECTIONS {
            if hi - lo <= 1 {
                let x = unordered(hi);
                // counts cannot resolve below the pivot floor
                return Ok(if x.abs() <= self.pivmin { 0.0 } else { x });
            }
            let mid = lo + (hi - lo) / 2;
            if self.count_below(unordered(mid)) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::SolverFailure { index: k })
    }

    /// The `k` smallest eigenvalues, ascending.
    pub fn lowest(&self, k: usize) -> Result<Vec<f64>> {
        let k = k.min(self.dim());
        let mut out: Vec<f64> = (0..k).map(|i| self.eigenvalue(i)).collect::<Result<_>>()?;
        // bisection results are monotone in k up to rounding; enforce it exactly
        for i in 1..out.len() {
            if out[i] < out[i - 1] {
                out[i] = out[i - 1];
            }
        }
        Ok(out)
    }
}

const SIGN: u64 = 1 << 63;

/// Monotone map from finite floats to integers.
fn ordered(x: f64) -> u64 {
    let b = x.to_bits();
    if b & SIGN != 0 {
        !b
    } else {
        b | SIGN
    }
}

fn unordered(k: u64) -> f64 {
    f64::from_bits(if k & SIGN != 0 { k & !SIGN } else { !k })
}

/// Number of eigenvalues of the tridiagonal `(diag, off)` strictly below `sigma`.
pub fn sturm_count(diag: &[f64], off: &[f64], sigma: f64) -> usize {
    Tridiagonal::new(diag, off).count_below(sigma)
}
