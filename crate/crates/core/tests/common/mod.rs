//! Shared test oracles.
#![allow(dead_code)]

use qrabi::hamiltonian::{BasisLabel, SectorMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Eigenvalues (ascending) and eigenvectors (columns, as rows of the returned
/// vec) of a dense symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>() + off;
        if off <= 1e-30 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order.iter().map(|&i| (0..n).map(|k| v[k][i]).collect()).collect();
    (values, vectors)
}

pub fn jacobi_eigenvalues(m: &SectorMatrix) -> Vec<f64> {
    jacobi_eigen(&m.to_dense()).0
}

/// Random symmetric band matrix with entries uniform in `[-scale, scale]`.
pub fn random_band(rng: &mut ChaCha8Rng, dim: usize, half_bandwidth: usize, scale: f64) -> SectorMatrix {
    let bands = (0..=half_bandwidth.min(dim - 1))
        .map(|k| (0..dim - k).map(|_| rng.gen_range(-scale..scale)).collect())
        .collect();
    SectorMatrix::new(BasisLabel::Generic, bands).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Normalized Hermite functions `φ_0..φ_n` of the oscillator with `m = 1`
/// and frequency `omega`, evaluated at `x`.
pub fn hermite_functions(n: usize, omega: f64, x: f64) -> Vec<f64> {
    let xi = omega.sqrt() * x;
    let mut out = Vec::with_capacity(n + 1);
    let h0 = (omega / std::f64::consts::PI).powf(0.25) * (-0.5 * xi * xi).exp();
    out.push(h0);
    if n >= 1 {
        out.push(2f64.sqrt() * xi * h0);
    }
    for k in 2..=n {
        let next = (2.0 / k as f64).sqrt() * xi * out[k - 1] - ((k - 1) as f64 / k as f64).sqrt() * out[k - 2];
        out.push(next);
    }
    out
}

/// `⟨φ_m|ψ_n⟩` for oscillators of frequencies `w1`, `w2` by trapezoidal quadrature.
pub fn overlap_by_quadrature(n: usize, w1: f64, w2: f64) -> Vec<Vec<f64>> {
    let half_width = 12.0 * (n as f64 + 1.0).sqrt() / w1.min(w2).sqrt();
    let steps = 40_000;
    let h = 2.0 * half_width / steps as f64;
    let mut s = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..=steps {
        let x = -half_width + h * i as f64;
        let a = hermite_functions(n, w1, x);
        let b = hermite_functions(n, w2, x);
        let wgt = if i == 0 || i == steps { 0.5 * h } else { h };
        for m in 0..=n {
            for k in 0..=n {
                s[m][k] += wgt * a[m] * b[k];
            }
        }
    }
    s
}
