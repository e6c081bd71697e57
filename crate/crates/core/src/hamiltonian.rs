//! Truncated matrix representations of the Rabi-type Hamiltonians.
//!
//! A cutoff `N` always means Fock states `|0⟩..|N⟩`. The spin⊗Fock basis is
//! interleaved with the spin index fastest: `|↑,0⟩, |↓,0⟩, |↑,1⟩, |↓,1⟩, …`,
//! so the state `|s,n⟩` sits at index `2n + s` with `s = 0` for ↑.

use crate::error::{invalid, Error, Result};
use crate::model::ModelParams;

/// Which basis a matrix (and therefore its eigenvectors) is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    /// Interleaved spin⊗Fock basis with cutoff N, dimension 2(N+1).
    FullSpinFock(usize),
    /// Parity +1 sector `|↑,0⟩, |↓,1⟩, |↑,2⟩, …`, dimension N+1.
    ParityPlus(usize),
    /// Parity −1 sector `|↓,0⟩, |↑,1⟩, |↓,2⟩, …`, dimension N+1.
    ParityMinus(usize),
    /// Jaynes–Cummings doublet `(|↑,n⟩, |↓,n+1⟩)`.
    JcBlock(usize),
    /// Anything else (test matrices).
    Generic,
}

impl BasisLabel {
    /// Fock cutoff, where one is defined.
    pub fn cutoff(&self) -> Option<usize> {
        match *self {
            BasisLabel::FullSpinFock(n) | BasisLabel::ParityPlus(n) | BasisLabel::ParityMinus(n) => Some(n),
            _ => None,
        }
    }
}

/// Parity sector of the ε = 0 Hamiltonian, labelled by the eigenvalue of
/// `Π = (−1)^{a†a} σ_z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Plus => 1.0,
            Parity::Minus => -1.0,
        }
    }

    /// Spin index (0 = ↑, 1 = ↓) carried by Fock level `n` inside this sector.
    pub fn spin_of(self, n: usize) -> usize {
        match (self, n % 2) {
            (Parity::Plus, 0) | (Parity::Minus, 1) => 0,
            _ => 1,
        }
    }
}

/// Symmetric banded matrix stored by diagonals.
///
/// `bands[0]` is the main diagonal, `bands[k]` holds the entries `(i, i+k)`.
/// Trailing all-zero bands are dropped, so `half_bandwidth` is the true one.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorMatrix {
    bands: Vec<Vec<f64>>,
    basis: BasisLabel,
}

impl SectorMatrix {
    pub fn new(basis: BasisLabel, mut bands: Vec<Vec<f64>>) -> Result<Self> {
        let dim = bands.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        for (k, band) in bands.iter().enumerate() {
            if band.len() != dim.saturating_sub(k) {
                return Err(Error::InvalidMatrix(format!(
                    "band {k} has length {}, expected {}",
                    band.len(),
                    dim.saturating_sub(k)
                )));
            }
            if band.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidMatrix(format!("band {k} has non-finite entries")));
            }
        }
        while bands.len() > 1 && bands.last().is_some_and(|b| b.iter().all(|&x| x == 0.0)) {
            bands.pop();
        }
        Ok(Self { bands, basis })
    }

    pub fn tridiagonal(basis: BasisLabel, diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        Self::new(basis, vec![diag, off])
    }

    pub fn dim(&self) -> usize {
        self.bands[0].len()
    }

    pub fn half_bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    pub fn basis(&self) -> BasisLabel {
        self.basis
    }

    pub fn diag(&self) -> &[f64] {
        &self.bands[0]
    }

    /// Entries `(i, i+k)`; empty beyond the bandwidth.
    pub fn band(&self, k: usize) -> &[f64] {
        self.bands.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.bands.get(hi - lo).map_or(0.0, |b| b[lo])
    }

    /// Largest absolute row sum; bounds the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        let b = self.half_bandwidth();
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(b);
                let hi = (i + b).min(n - 1);
                (lo..=hi).map(|j| self.get(i, j).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(x.len(), n, "vector length must match matrix dimension");
        let mut y: Vec<f64> = self.bands[0].iter().zip(x).map(|(d, v)| d * v).collect();
        for (k, band) in self.bands.iter().enumerate().skip(1) {
            for (i, &a) in band.iter().enumerate() {
                y[i] += a * x[i + k];
                y[i + k] += a * x[i];
            }
        }
        y
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }
}

/// Adaptive truncation settings: start at `n_start`, double until the lowest
/// `m_levels` eigenvalues move by less than `tol` (absolute), never beyond `n_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub n_start: usize,
    pub n_max: usize,
    pub m_levels: usize,
    pub tol: f64,
}

impl TruncationPolicy {
    pub const DEFAULT_TOL: f64 = 1e-9;
    pub const DEFAULT_N_START: usize = 32;
    pub const DEFAULT_N_MAX: usize = 4096;

    pub fn new(n_start: usize, n_max: usize, m_levels: usize, tol: f64) -> Result<Self> {
        let p = Self {
            n_start,
            n_max,
            m_levels,
            tol,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_levels(m_levels: usize) -> Self {
        Self {
            n_start: Self::DEFAULT_N_START,
            n_max: Self::DEFAULT_N_MAX,
            m_levels,
            tol: Self::DEFAULT_TOL,
        }
    }

    pub fn levels(self, m_levels: usize) -> Self {
        Self { m_levels, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_start < 1 {
            return Err(invalid("truncation.n_start", "must be >= 1"));
        }
        if self.n_max < self.n_start {
            return Err(invalid("truncation.n_max", "must be >= n_start"));
        }
        if self.m_levels < 1 {
            return Err(invalid("levels", "must be >= 1"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(invalid("truncation.tol", "must be > 0"));
        }
        Ok(())
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self::with_levels(1)
    }
}

fn sqrt_usize(n: usize) -> f64 {
    (n as f64).sqrt()
}

/// Jacobi (tridiagonal) matrix of one parity sector of the plain quantum
/// Rabi model: diagonal `ω_c(n+½) ± (−1)^n ω_a/2`, off-diagonal `g√(n+1)`.
pub fn build_parity_sector(p: &ModelParams, sector: Parity, cutoff: usize) -> Result<SectorMatrix> {
    if p.epsilon != 0.0 {
        return Err(invalid("epsilon", "parity sectors need epsilon = 0"));
    }
    if !p.coupling.is_none() {
        return Err(invalid("coupling.C", "tridiagonal parity sectors need C = 0"));
    }
    build_parity_sector_a2(p, sector, cutoff)
}

/// Parity sector `H_±` over the α-Fock basis including the A²-term:
/// pentadiagonal with diagonal `ω_c(n+½) + K(2n+1) ± (−1)^n ω_a/2`,
/// first band `g√(n+1)` and second band `K√((n+1)(n+2))`, where `K = C_g g`.
pub fn build_parity_sector_a2(p: &ModelParams, sector: Parity, cutoff: usize) -> Result<SectorMatrix> {
    p.validate()?;
    if p.epsilon != 0.0 {
        return Err(invalid("epsilon", "parity sectors need epsilon = 0"));
    }
    if cutoff < 1 {
        return Err(invalid("cutoff", "parity sectors need N >= 1"));
    }
    let dim = cutoff + 1;
    let k = p.a2_strength() * p.g;
    let delta = 0.5 * p.omega_a * sector.sign();
    let diag = (0..dim)
        .map(|n| {
            let alt = if n % 2 == 0 { delta } else { -delta };
            p.omega_c * (n as f64 + 0.5) + k * (2 * n + 1) as f64 + alt
        })
        .collect();
    let band1 = (0..dim - 1).map(|n| p.g * sqrt_usize(n + 1)).collect();
    let band2 = (0..dim.saturating_sub(2))
        .map(|n| k * sqrt_usize((n + 1) * (n + 2)))
        .collect();
    let basis = match sector {
        Parity::Plus => BasisLabel::ParityPlus(cutoff),
        Parity::Minus => BasisLabel::ParityMinus(cutoff),
    };
    SectorMatrix::new(basis, vec![diag, band1, band2])
}

/// Full generalized Rabi Hamiltonian with A²-term in the interleaved
/// spin⊗Fock basis (dimension 2(N+1), half-bandwidth ≤ 4).
pub fn build_full(p: &ModelParams, cutoff: usize) -> Result<SectorMatrix> {
    p.validate()?;
    let dim = 2 * (cutoff + 1);
    let k = p.a2_strength() * p.g;
    let mut bands: Vec<Vec<f64>> = (0..5).map(|b| vec![0.0; dim - b.min(dim)]).collect();
    for n in 0..=cutoff {
        let up = 2 * n;
        let down = up + 1;
        let cavity = p.omega_c * (n as f64 + 0.5) + k * (2 * n + 1) as f64;
        bands[0][up] = cavity + 0.5 * p.omega_a;
        bands[0][down] = cavity - 0.5 * p.omega_a;
        bands[1][up] = -0.5 * p.epsilon;
        if n < cutoff {
            let hop = p.g * sqrt_usize(n + 1);
            // |↑,n⟩ ↔ |↓,n+1⟩ and |↓,n⟩ ↔ |↑,n+1⟩
            bands[3][up] = hop;
            bands[1][down] = hop;
        }
        if n + 2 <= cutoff {
            let pair = k * sqrt_usize((n + 1) * (n + 2));
            bands[4][up] = pair;
            bands[4][down] = pair;
        }
    }
    SectorMatrix::new(BasisLabel::FullSpinFock(cutoff), bands)
}

/// The 2×2 Jaynes–Cummings doublet on `(|↑,n⟩, |↓,n+1⟩)` for
/// `ω_a = ω_c = omega`: diagonal `ω(n+1)`, coupling `g√(n+1)`.
pub fn build_jaynes_cummings_block(omega: f64, g: f64, n: usize) -> Result<SectorMatrix> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(invalid("omega", "must be > 0"));
    }
    let level = omega * (n + 1) as f64;
    SectorMatrix::tridiagonal(
        BasisLabel::JcBlock(n),
        vec![level, level],
        vec![g * sqrt_usize(n + 1)],
    )
}

/// Jaynes–Cummings Hamiltonian `(ω/2)σ_z + ω(a†a+½) + g(σ₊a + σ₋a†)` in the
/// interleaved spin⊗Fock basis with cutoff N.
pub fn build_jaynes_cummings_full(omega: f64, g: f64, cutoff: usize) -> Result<SectorMatrix> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(invalid("omega", "must be > 0"));
    }
    if !(g.is_finite() && g >= 0.0) {
        return Err(invalid("g", "must be >= 0"));
    }
    let dim = 2 * (cutoff + 1);
    let mut diag = vec![0.0; dim];
    let mut band3 = vec![0.0; dim.saturating_sub(3)];
    for n in 0..=cutoff {
        let cavity = omega * (n as f64 + 0.5);
        diag[2 * n] = cavity + 0.5 * omega;
        diag[2 * n + 1] = cavity - 0.5 * omega;
        if n < cutoff {
            band3[2 * n] = g * sqrt_usize(n + 1);
        }
    }
    SectorMatrix::new(
        BasisLabel::FullSpinFock(cutoff),
        vec![diag, vec![0.0; dim - 1], vec![0.0; dim.saturating_sub(2)], band3],
    )
}

/// Writes a parity-sector vector into interleaved spin⊗Fock coordinates
/// with cutoff `cutoff` (≥ the sector's own cutoff).
pub fn embed_sector_vector(sector: Parity, v: &[f64], cutoff: usize) -> Vec<f64> {
    assert!(v.len() <= cutoff + 1, "sector vector longer than target basis");
    let mut out = vec![0.0; 2 * (cutoff + 1)];
    for (n, &c) in v.iter().enumerate() {
        out[2 * n + sector.spin_of(n)] = c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CouplingLaw;

    #[test]
    fn parity_sector_at_zero_coupling_is_diagonal() {
        let p = ModelParams::rabi(1.0, 0.0, 1.0, 0.0).unwrap();
        let m = build_parity_sector(&p, Parity::Plus, 2).unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(m.diag(), &[1.0, 1.0, 3.0]);
        assert_eq!(m.half_bandwidth(), 0);
    }

    #[test]
    fn parity_sector_entries() {
        let p = ModelParams::rabi(1.0, 0.0, 1.0, 0.5).unwrap();
        let m = build_parity_sector(&p, Parity::Plus, 1).unwrap();
        assert_eq!(m.diag(), &[1.0, 1.0]);
        assert_eq!(m.band(1), &[0.5]);
    }

    #[test]
    fn minus_sector_flips_delta() {
        let p = ModelParams::rabi(0.3, 0.0, 0.75, 1.1).unwrap();
        let plus = build_parity_sector(&p, Parity::Plus, 6).unwrap();
        let minus = build_parity_sector(&p, Parity::Minus, 6).unwrap();
        assert_eq!(plus.band(1), minus.band(1));
        for n in 0..=6 {
            let d = p.omega_c * (n as f64 + 0.5);
            let alt = if n % 2 == 0 { 0.15 } else { -0.15 };
            assert!((plus.diag()[n] - (d + alt)).abs() < 1e-15);
            assert!((minus.diag()[n] - (d - alt)).abs() < 1e-15);
        }
    }

    #[test]
    fn parity_sector_rejects_bias_and_a2() {
        let p = ModelParams::rabi(1.0, 0.1, 1.0, 0.5).unwrap();
        assert!(build_parity_sector(&p, Parity::Plus, 4).is_err());
        let p = ModelParams::new(1.0, 0.0, 1.0, 0.5, CouplingLaw::new(0.1, 1).unwrap()).unwrap();
        assert!(build_parity_sector(&p, Parity::Plus, 4).is_err());
        assert!(build_parity_sector_a2(&p, Parity::Plus, 4).is_ok());
        let p = ModelParams::rabi(1.0, 0.0, 1.0, 0.5).unwrap();
        assert!(build_parity_sector(&p, Parity::Plus, 0).is_err());
    }

    #[test]
    fn full_matrix_layout() {
        let p = ModelParams::new(0.4, 0.2, 1.0, 0.7, CouplingLaw::new(0.1, 1).unwrap()).unwrap();
        let m = build_full(&p, 5).unwrap();
        assert_eq!(m.dim(), 12);
        assert_eq!(m.half_bandwidth(), 4);
        let k = 0.1 * 0.7 * 0.7;
        // ⟨↑,1|H|↑,1⟩
        assert!((m.get(2, 2) - (1.5 + 3.0 * k + 0.2)).abs() < 1e-15);
        // −(ε/2)σ_x
        assert_eq!(m.get(2, 3), -0.1);
        // g σ_x (a + a†): |↑,1⟩ ↔ |↓,2⟩ and |↓,1⟩ ↔ |↑,2⟩
        assert!((m.get(2, 5) - 0.7 * 2f64.sqrt()).abs() < 1e-15);
        assert!((m.get(3, 4) - 0.7 * 2f64.sqrt()).abs() < 1e-15);
        // no |↑,1⟩ ↔ |↑,2⟩ coupling
        assert_eq!(m.get(2, 4), 0.0);
        // A² pair term |↓,1⟩ ↔ |↓,3⟩
        assert!((m.get(3, 7) - k * 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn full_matrix_without_a2_has_bandwidth_three() {
        let p = ModelParams::rabi(1.0, 0.0, 1.0, 0.5).unwrap();
        assert_eq!(build_full(&p, 10).unwrap().half_bandwidth(), 3);
    }

    #[test]
    fn mul_vec_matches_dense() {
        let p = ModelParams::new(0.4, 0.2, 1.0, 0.7, CouplingLaw::new(0.1, 2).unwrap()).unwrap();
        let m = build_full(&p, 4).unwrap();
        let x: Vec<f64> = (0..m.dim()).map(|i| (i as f64 * 0.37).sin()).collect();
        let dense = m.to_dense();
        let y = m.mul_vec(&x);
        for i in 0..m.dim() {
            let yi: f64 = dense[i].iter().zip(&x).map(|(a, b)| a * b).sum();
            assert!((yi - y[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn matrix_rejects_bad_shapes() {
        assert!(SectorMatrix::new(BasisLabel::Generic, vec![vec![1.0, 2.0], vec![0.1, 0.2]]).is_err());
        assert!(SectorMatrix::new(BasisLabel::Generic, vec![vec![1.0, f64::NAN]]).is_err());
        assert!(SectorMatrix::new(BasisLabel::Generic, vec![vec![]]).is_err());
    }

    #[test]
    fn embedding_places_spins() {
        let v = [1.0, 2.0, 3.0];
        assert_eq!(embed_sector_vector(Parity::Plus, &v, 2), vec![1.0, 0.0, 0.0, 2.0, 3.0, 0.0]);
        assert_eq!(embed_sector_vector(Parity::Minus, &v, 2), vec![0.0, 1.0, 2.0, 0.0, 0.0, 3.0]);
    }

    #[test]
    fn truncation_policy_validation() {
        assert!(TruncationPolicy::new(0, 10, 1, 1e-9).is_err());
        assert!(TruncationPolicy::new(10, 5, 1, 1e-9).is_err());
        assert!(TruncationPolicy::new(4, 8, 0, 1e-9).is_err());
        assert!(TruncationPolicy::new(4, 8, 1, 0.0).is_err());
        assert!(TruncationPolicy::new(4, 8, 1, 1e-9).is_ok());
    }
}
