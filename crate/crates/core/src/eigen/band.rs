//! Givens reduction of a symmetric band matrix to tridiagonal form and
//! banded inverse iteration for selected eigenvectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hamiltonian::SectorMatrix;

/// Lower band storage with one spare diagonal for the bulge.
struct LowerBand {
    n: usize,
    w: usize,
    data: Vec<f64>,
}

impl LowerBand {
    fn from_matrix(m: &SectorMatrix) -> Self {
        let n = m.dim();
        let w = m.half_bandwidth() + 1;
        let mut data = vec![0.0; n * (w + 1)];
        for d in 0..=m.half_bandwidth() {
            for (j, &v) in m.band(d).iter().enumerate() {
                data[(j + d) * (w + 1) + d] = v;
            }
        }
        Self { n, w, data }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d > self.w {
            0.0
        } else {
            self.data[r * (self.w + 1) + d]
        }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d > self.w {
            debug_assert!(v.abs() < 1e-300, "fill outside band storage");
            return;
        }
        self.data[r * (self.w + 1) + d] = v;
    }

    /// Applies `G A Gᵀ` with `G = [[c, s], [−s, c]]` acting on indices `p, p+1`.
    fn rotate(&mut self, p: usize, c: f64, s: f64) {
        let q = p + 1;
        let lo = p.saturating_sub(self.w);
        let hi = (q + self.w).min(self.n - 1);
        for k in lo..=hi {
            if k == p || k == q {
                continue;
            }
            let akp = self.get(k, p);
            let akq = self.get(k, q);
            if akp == 0.0 && akq == 0.0 {
                continue;
            }
            self.set(k, p, c * akp + s * akq);
            self.set(k, q, -s * akp + c * akq);
        }
        let app = self.get(p, p);
        let aqq = self.get(q, q);
        let apq = self.get(p, q);
        let cs = c * s;
        self.set(p, p, c * c * app + 2.0 * cs * apq + s * s * aqq);
        self.set(q, q, s * s * app - 2.0 * cs * apq + c * c * aqq);
        self.set(p, q, cs * (aqq - app) + (c * c - s * s) * apq);
    }

    /// Zeroes `A(row, col)` by a rotation in the plane `(row−1, row)`.
    fn annihilate(&mut self, row: usize, col: usize) {
        let y = self.get(row, col);
        if y == 0.0 {
            return;
        }
        let x = self.get(row - 1, col);
        let r = x.hypot(y);
        self.rotate(row - 1, x / r, y / r);
        self.set(row, col, 0.0);
    }
}

/// Orthogonally similar tridiagonal form `(diag, off)` of a symmetric band matrix.
pub fn tridiagonalize(m: &SectorMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    if m.half_bandwidth() <= 1 {
        let off = if m.half_bandwidth() == 1 {
            m.band(1).to_vec()
        } else {
            vec![0.0; n - 1]
        };
        return (m.diag().to_vec(), off);
    }
    let mut a = LowerBand::from_matrix(m);
    for b in (2..=m.half_bandwidth()).rev() {
        for j in 0..n.saturating_sub(b) {
            let mut row = j + b;
            let mut col = j;
            while row < n {
                a.annihilate(row, col);
                col = row - 1;
                row += b;
            }
        }
    }
    let diag = (0..n).map(|i| a.get(i, i)).collect();
    let off = (0..n - 1).map(|i| a.get(i + 1, i)).collect();
    (diag, off)
}

/// LU factorization with partial pivoting of `A − λI` for banded `A`.
struct BandLu {
    n: usize,
    b: usize,
    /// Row `i` holds columns `i−b ..= i+2b`.
    u: Vec<f64>,
    /// Multipliers of step `j` for rows `j+1 ..= j+b`.
    l: Vec<f64>,
    piv: Vec<usize>,
}

impl BandLu {
    fn width(b: usize) -> usize {
        3 * b + 1
    }

    fn idx(&self, i: usize, col: usize) -> usize {
        i * Self::width(self.b) + (col + self.b - i)
    }

    fn new(m: &SectorMatrix, shift: f64) -> Self {
        let n = m.dim();
        let b = m.half_bandwidth().max(1);
        let w = Self::width(b);
        let mut lu = Self {
            n,
            b,
            u: vec![0.0; n * w],
            l: vec![0.0; n * b],
            piv: vec![0; n],
        };
        for i in 0..n {
            let lo = i.saturating_sub(b);
            let hi = (i + b).min(n - 1);
            for j in lo..=hi {
                let v = m.get(i, j) - if i == j { shift } else { 0.0 };
                let k = lu.idx(i, j);
                lu.u[k] = v;
            }
        }
        let floor = f64::EPSILON * m.norm_inf().max(shift.abs()).max(f64::MIN_POSITIVE);
        for j in 0..n {
            let last = (j + b).min(n - 1);
            let mut p = j;
            let mut best = lu.u[lu.idx(j, j)].abs();
            for r in j + 1..=last {
                let v = lu.u[lu.idx(r, j)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            lu.piv[j] = p;
            let right = (j + 2 * b).min(n - 1);
            if p != j {
                for c in j..=right {
                    let a = lu.idx(j, c);
                    let bb = lu.idx(p, c);
                    lu.u.swap(a, bb);
                }
            }
            let d = lu.idx(j, j);
            if lu.u[d].abs() < floor {
                lu.u[d] = if lu.u[d] < 0.0 { -floor } else { floor };
            }
            let pivot = lu.u[d];
            for r in j + 1..=last {
                let k = lu.idx(r, j);
                let f = lu.u[k] / pivot;
                lu.u[k] = 0.0;
                lu.l[j * b + (r - j - 1)] = f;
                if f != 0.0 {
                    for c in j + 1..=right {
                        let src = lu.u[lu.idx(j, c)];
                        let dst = lu.idx(r, c);
                        lu.u[dst] -= f * src;
                    }
                }
            }
        }
        lu
    }

    fn solve(&self, rhs: &mut [f64]) {
        let (n, b) = (self.n, self.b);
        for j in 0..n {
            rhs.swap(j, self.piv[j]);
            let x = rhs[j];
            for r in j + 1..=(j + b).min(n - 1) {
                rhs[r] -= self.l[j * b + (r - j - 1)] * x;
            }
        }
        for j in (0..n).rev() {
            let mut s = rhs[j];
            for c in j + 1..=(j + 2 * b).min(n - 1) {
                s -= self.u[self.idx(j, c)] * rhs[c];
            }
            rhs[j] = s / self.u[self.idx(j, j)];
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for q in basis {
        let c = dot(v, q);
        for (x, y) in v.iter_mut().zip(q) {
            *x -= c * y;
        }
    }
}

/// Fixes the sign so the largest component (first on ties) is positive.
fn canonical_sign(v: &mut [f64]) {
    let mut best = 0.0;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

pub(crate) fn residual(m: &SectorMatrix, lambda: f64, v: &[f64]) -> f64 {
    let hv = m.mul_vec(v);
    hv.iter()
        .zip(v)
        .map(|(h, x)| (h - lambda * x).powi(2))
        .sum::<f64>()
        .sqrt()
}

const MAX_INVERSE_STEPS: usize = 5;

/// Unit eigenvectors for the given ascending eigenvalues by inverse iteration.
pub fn inverse_iteration(m: &SectorMatrix, eigenvalues: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = m.dim();
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(eigenvalues.len());
    for (index, &lambda) in eigenvalues.iter().enumerate() {
        let target = 1e-8 * lambda.abs().max(1.0);
        let lu = BandLu::new(m, lambda);
        let mut rng = ChaCha8Rng::seed_from_u64(index as u64);
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        orthogonalize(&mut x, &vectors);
        let nx = norm(&x);
        x.iter_mut().for_each(|v| *v /= nx);
        let mut done = false;
        for _ in 0..MAX_INVERSE_STEPS {
            lu.solve(&mut x);
            orthogonalize(&mut x, &vectors);
            orthogonalize(&mut x, &vectors);
            let nx = norm(&x);
            if !(nx.is_finite() && nx > 0.0) {
                return Err(Error::SolverFailure { index });
            }
            x.iter_mut().for_each(|v| *v /= nx);
            if residual(m, lambda, &x) <= target {
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::SolverFailure { index });
        }
        canonical_sign(&mut x);
        vectors.push(x);
    }
    Ok(vectors)
}
