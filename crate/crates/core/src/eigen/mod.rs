//! Symmetric band eigensolvers and the adaptive truncation loop.

mod band;
mod sturm;

pub use band::{inverse_iteration, tridiagonalize};
pub use sturm::{sturm_count, Tridiagonal};

use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{BasisLabel, SectorMatrix, TruncationPolicy};

/// Sorted eigenvalues with optional unit eigenvectors in basis coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub basis: BasisLabel,
    pub truncation_used: usize,
    pub converged_levels: usize,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn vector(&self, k: usize) -> Option<&[f64]> {
        self.eigenvectors.as_ref()?.get(k).map(Vec::as_slice)
    }
}

fn truncation_of(m: &SectorMatrix) -> usize {
    m.basis().cutoff().unwrap_or(m.dim())
}

fn solve(m: &SectorMatrix, k: usize, want_vectors: bool) -> Result<Spectrum> {
    let (diag, off) = tridiagonalize(m);
    let eigenvalues = Tridiagonal::new(&diag, &off).lowest(k)?;
    let eigenvectors = if want_vectors {
        Some(inverse_iteration(m, &eigenvalues)?)
    } else {
        None
    };
    Ok(Spectrum {
        converged_levels: eigenvalues.len(),
        eigenvalues,
        eigenvectors,
        basis: m.basis(),
        truncation_used: truncation_of(m),
    })
}

/// Full spectrum of a tridiagonal matrix by Sturm bisection.
pub fn eigen_tridiagonal(m: &SectorMatrix, want_vectors: bool) -> Result<Spectrum> {
    if m.half_bandwidth() > 1 {
        return Err(Error::InvalidMatrix(format!(
            "expected a tridiagonal matrix, half-bandwidth is {}",
            m.half_bandwidth()
        )));
    }
    solve(m, m.dim(), want_vectors)
}

/// Full spectrum of a symmetric band matrix.
pub fn eigen_banded(m: &SectorMatrix, want_vectors: bool) -> Result<Spectrum> {
    solve(m, m.dim(), want_vectors)
}

/// The `k` lowest eigenpairs (fewer if the matrix is smaller).
pub fn eigen_lowest(m: &SectorMatrix, k: usize, want_vectors: bool) -> Result<Spectrum> {
    solve(m, k, want_vectors)
}

/// Doubles the cutoff from `policy.n_start` until the lowest `policy.m_levels`
/// eigenvalues at N and 2N agree to `policy.tol`, then returns those levels
/// computed at 2N. `builder` maps a cutoff to a matrix; successive cutoffs
/// must give nested leading submatrices.
pub fn eigen_adaptive<F>(builder: F, policy: &TruncationPolicy, want_vectors: bool) -> Result<Spectrum>
where
    F: Fn(usize) -> Result<SectorMatrix>,
{
    policy.validate()?;
    let m = policy.m_levels;
    let mut n = policy.n_start;
    let mut current = eigen_lowest(&builder(n)?, m, false)?;
    let mut deltas = vec![f64::INFINITY; m];
    loop {
        let next_n = match n.checked_mul(2) {
            Some(v) if v <= policy.n_max => v,
            _ => return Err(Error::NotConverged { cutoff: n, deltas }),
        };
        let matrix = builder(next_n)?;
        let next = eigen_lowest(&matrix, m, false)?;
        deltas = (0..m)
            .map(|k| match (current.eigenvalues.get(k), next.eigenvalues.get(k)) {
                (Some(a), Some(b)) => (a - b).abs(),
                _ => f64::INFINITY,
            })
            .collect();
        if deltas.iter().all(|&d| d < policy.tol) {
            let mut out = if want_vectors {
                eigen_lowest(&matrix, m, true)?
            } else {
                next
            };
            out.truncation_used = next_n;
            out.converged_levels = m;
            return Ok(out);
        }
        n = next_n;
        current = next;
    }
}

/// Checks the spectrum invariants against the matrix it came from:
/// ascending order, orthonormal vectors and bounded residuals.
pub fn verify_spectrum(m: &SectorMatrix, s: &Spectrum, ortho_tol: f64) -> Result<()> {
    if s.eigenvalues.windows(2).any(|w| w[0] > w[1]) {
        return Err(invalid("spectrum", "eigenvalues not ascending"));
    }
    if let Some(vs) = &s.eigenvectors {
        for (k, v) in vs.iter().enumerate() {
            let lambda = s.eigenvalues[k];
            if band::residual(m, lambda, v) > 1e-8 * lambda.abs().max(1.0) {
                return Err(Error::SolverFailure { index: k });
            }
            for (j, w) in vs.iter().enumerate().take(k + 1) {
                let d: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                let want = if j == k { 1.0 } else { 0.0 };
                if (d - want).abs() > ortho_tol {
                    return Err(invalid("spectrum", format!("vectors {j},{k} overlap {d}")));
                }
            }
        }
    }
    Ok(())
}
