//! Ground-state photon observables, their bounds, and the spectral
//! reconstruction of the photon number.

use crate::eigen::{eigen_adaptive, eigen_lowest, Spectrum};
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{
    build_full, build_parity_sector_a2, embed_sector_vector, BasisLabel, Parity, TruncationPolicy,
};
use crate::model::{renormalize, ModelParams, RenormalizedParams};
use crate::pair_theory::{ground_energy_bounds, TAIL_LIMIT};

/// Squared magnitude below which a coefficient counts as zero.
pub const WITNESS_THRESHOLD: f64 = 1e-8;

/// Slack used by the bound checks.
pub const BOUND_SLACK: f64 = 1e-8;

/// Spectrum of a model with eigenvectors (if any) in interleaved spin⊗Fock
/// coordinates, plus the parity of each level when ε = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpectrum {
    pub spectrum: Spectrum,
    pub parities: Option<Vec<Parity>>,
}

impl ModelSpectrum {
    pub fn ground_state(&self) -> Option<&[f64]> {
        self.spectrum.vector(0)
    }

    pub fn ground_parity(&self) -> Option<Parity> {
        self.parities.as_ref().map(|p| p[0])
    }
}

/// Weight on Fock levels above half the cutoff of an interleaved state.
pub fn tail_mass(state: &[f64]) -> f64 {
    let cutoff = state.len() / 2 - 1;
    state
        .iter()
        .enumerate()
        .filter(|(i, _)| i / 2 > cutoff / 2)
        .map(|(_, c)| c * c)
        .sum()
}

fn max_tail(vectors: &[Vec<f64>]) -> f64 {
    vectors.iter().map(|v| tail_mass(v)).fold(0.0, f64::max)
}

fn require_tail(state: &[f64]) -> Result<()> {
    let mass = tail_mass(state);
    if mass > TAIL_LIMIT {
        return Err(Error::TailMass {
            mass,
            limit: TAIL_LIMIT,
        });
    }
    Ok(())
}

type SectorLevel = (f64, Parity, Option<Vec<f64>>);

fn sector_solve(p: &ModelParams, cutoff: usize, m: usize, vectors: bool) -> Result<Vec<SectorLevel>> {
    let mut out = Vec::with_capacity(2 * m);
    for sector in [Parity::Minus, Parity::Plus] {
        let s = eigen_lowest(&build_parity_sector_a2(p, sector, cutoff)?, m, vectors)?;
        for (k, &e) in s.eigenvalues.iter().enumerate() {
            let v = s.vector(k).map(|v| embed_sector_vector(sector, v, cutoff));
            out.push((e, sector, v));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    // a numerically unresolved doublet keeps the ground state in the − sector
    if let Some(minus) = out.iter().position(|x| x.1 == Parity::Minus) {
        if minus > 0 && (out[minus].0 - out[0].0) <= 1e-11 * out[0].0.abs().max(1.0) {
            let item = out.remove(minus);
            out.insert(0, item);
        }
    }
    out.truncate(m);
    Ok(out)
}

fn parity_spectrum(p: &ModelParams, policy: &TruncationPolicy, want_vectors: bool) -> Result<ModelSpectrum> {
    let m = policy.m_levels;
    let mut cutoff = 0;
    for sector in [Parity::Minus, Parity::Plus] {
        let s = eigen_adaptive(|n| build_parity_sector_a2(p, sector, n), policy, false)?;
        cutoff = cutoff.max(s.truncation_used);
    }
    let mut levels = sector_solve(p, cutoff, m, want_vectors)?;
    if want_vectors {
        loop {
            let vs: Vec<Vec<f64>> = levels.iter().filter_map(|l| l.2.clone()).collect();
            if max_tail(&vs) <= TAIL_LIMIT || cutoff * 2 > policy.n_max {
                break;
            }
            cutoff *= 2;
            levels = sector_solve(p, cutoff, m, true)?;
        }
    }
    let eigenvalues = levels.iter().map(|l| l.0).collect();
    let parities = levels.iter().map(|l| l.1).collect();
    let eigenvectors = if want_vectors {
        Some(levels.into_iter().filter_map(|l| l.2).collect())
    } else {
        None
    };
    Ok(ModelSpectrum {
        spectrum: Spectrum {
            eigenvalues,
            eigenvectors,
            basis: BasisLabel::FullSpinFock(cutoff),
            truncation_used: cutoff,
            converged_levels: m,
        },
        parities: Some(parities),
    })
}

fn full_spectrum(p: &ModelParams, policy: &TruncationPolicy, want_vectors: bool) -> Result<ModelSpectrum> {
    let mut s = eigen_adaptive(|n| build_full(p, n), policy, want_vectors)?;
    if want_vectors {
        let mut cutoff = s.truncation_used;
        while max_tail(s.eigenvectors.as_deref().unwrap_or(&[])) > TAIL_LIMIT && cutoff * 2 <= policy.n_max {
            cutoff *= 2;
            s = eigen_lowest(&build_full(p, cutoff)?, policy.m_levels, true)?;
        }
        s.truncation_used = cutoff;
        s.converged_levels = policy.m_levels;
    }
    Ok(ModelSpectrum {
        spectrum: s,
        parities: None,
    })
}

/// Lowest `policy.m_levels` levels of `H_{A²}` at `p`, converged adaptively.
/// For ε = 0 both parity sectors are solved separately and merged.
pub fn model_spectrum(p: &ModelParams, policy: &TruncationPolicy, want_vectors: bool) -> Result<ModelSpectrum> {
    p.validate()?;
    if p.epsilon == 0.0 {
        parity_spectrum(p, policy, want_vectors)
    } else {
        full_spectrum(p, policy, want_vectors)
    }
}

fn fock_cutoff(state: &[f64]) -> Result<usize> {
    if state.len() < 2 || !state.len().is_multiple_of(2) {
        return Err(invalid("state", "length must be 2(N+1)"));
    }
    Ok(state.len() / 2 - 1)
}

/// `Σ_n n (|c_n^↑|² + |c_n^↓|²)`.
pub fn number_expectation(state: &[f64]) -> Result<f64> {
    fock_cutoff(state)?;
    require_tail(state)?;
    Ok(state.iter().enumerate().map(|(i, c)| (i / 2) as f64 * c * c).sum())
}

/// `⟨a + a†⟩` and `⟨a² + a†²⟩`.
fn quadratures(state: &[f64]) -> (f64, f64) {
    let cutoff = state.len() / 2 - 1;
    let mut first = 0.0;
    let mut second = 0.0;
    for s in 0..2 {
        for n in 0..cutoff {
            first += 2.0 * ((n + 1) as f64).sqrt() * state[2 * n + s] * state[2 * n + 2 + s];
        }
        for n in 0..cutoff.saturating_sub(1) {
            second += 2.0 * (((n + 1) * (n + 2)) as f64).sqrt() * state[2 * n + s] * state[2 * n + 4 + s];
        }
    }
    (first, second)
}

/// `⟨a² + a†²⟩` of an interleaved state.
pub fn pair_expectation(state: &[f64]) -> Result<f64> {
    fock_cutoff(state)?;
    require_tail(state)?;
    Ok(quadratures(state).1)
}

/// `(ΔΦ)²` for `Φ = (a + a†)/√(2ω)`.
pub fn field_fluctuation(state: &[f64], omega: f64) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(invalid("omega", "must be > 0"));
    }
    let n = number_expectation(state)?;
    let (first, second) = quadratures(state);
    let x2 = second + 2.0 * n + 1.0;
    Ok((x2 - first * first) / (2.0 * omega))
}

/// `(upper, lower)` bounds on the renormalized photon number:
/// `g̃²/ω_g²` and `max(L, 0)²`.
pub fn ren_photon_bounds(p: &ModelParams) -> (f64, f64) {
    let r = renormalize(p);
    let x = r.displacement();
    let upper = x * x;
    let l = ren_lower_function(p);
    (upper, l.max(0.0).powi(2))
}

/// `L(g) = g̃/ω_g − √(√(ω_a²+ε²)(1 − e^{−2g̃²/ω_g²})/(2ω_g))`.
pub fn ren_lower_function(p: &ModelParams) -> f64 {
    let r = renormalize(p);
    let x = r.displacement();
    let spread = p.atom_splitting() * (-(-2.0 * x * x).exp_m1()) / (2.0 * r.omega_g);
    x - spread.sqrt()
}

/// Spectral-sum reconstruction of the renormalized ground-state photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PullThrough {
    /// Sum over the levels `0..=M`.
    pub partial: f64,
    /// Bound on the omitted levels.
    pub tail: f64,
    /// Largest single term; a lower bound on its own.
    pub single_level_lower: f64,
    /// Largest `|⟨E_ν|σ_x|E_0⟩|² (E_ν − E_0)² / ω_a²` over `ν ≥ 1`; at most 1.
    pub transition_ratio: f64,
}

/// Evaluates the resolvent sum for `N_0` with `terms` excited levels.
/// `ms` must hold eigenpairs of the C = 0 Hamiltonian at `(ω_g, g̃)`.
pub fn pull_through_reconstruction(
    ms: &ModelSpectrum,
    r: &RenormalizedParams,
    omega_a: f64,
    terms: usize,
) -> Result<PullThrough> {
    let s = &ms.spectrum;
    let needed = terms + 2;
    let vectors = s.eigenvectors.as_deref().unwrap_or(&[]);
    let available = s.len().min(vectors.len() + 1);
    if s.len() < needed || vectors.len() < terms + 1 {
        return Err(Error::InsufficientLevels { needed, available });
    }
    if r.g_tilde == 0.0 {
        return Ok(PullThrough {
            partial: 0.0,
            tail: 0.0,
            single_level_lower: 0.0,
            transition_ratio: 0.0,
        });
    }
    let e0 = s.eigenvalues[0];
    let ground = &vectors[0];
    let flipped: Vec<f64> = ground.chunks(2).flat_map(|c| [c[1], c[0]]).collect();
    let g2 = r.g_tilde * r.g_tilde;
    let mut partial = 0.0;
    let mut weight_sum = 0.0;
    let mut single = 0.0f64;
    let mut ratio = 0.0f64;
    for nu in 0..=terms {
        let same_parity = ms.parities.as_ref().is_some_and(|p| p[nu] == p[0]);
        let w = if same_parity {
            0.0
        } else {
            let o: f64 = vectors[nu].iter().zip(&flipped).map(|(a, b)| a * b).sum();
            o * o
        };
        weight_sum += w;
        let gap = s.eigenvalues[nu] - e0;
        let term = g2 * w / (gap + r.omega_g).powi(2);
        partial += term;
        single = single.max(term);
        if nu > 0 && gap > 0.0 && omega_a > 0.0 {
            ratio = ratio.max(w * gap * gap / (omega_a * omega_a));
        }
    }
    let next_gap = s.eigenvalues[terms + 1] - e0;
    let tail = g2 * (1.0 - weight_sum).max(0.0) / (next_gap + r.omega_g).powi(2);
    Ok(PullThrough {
        partial,
        tail,
        single_level_lower: single,
        transition_ratio: ratio,
    })
}

fn require_a2(p: &ModelParams) -> Result<()> {
    if p.coupling.is_none() {
        return Err(invalid("coupling.C", "bare bound needs C > 0"));
    }
    if p.coupling.ell() == 0 {
        return Err(invalid("coupling.ell", "bare bound needs ell 1 or 2"));
    }
    Ok(())
}

/// Correction `ε(g) = 2C_g g g̃²/ω_g³ + 2C/ω_g` in the bare-photon lower bound.
pub fn bare_epsilon(p: &ModelParams) -> Result<f64> {
    require_a2(p)?;
    let r = renormalize(p);
    let k = p.a2_strength() * p.g;
    Ok(2.0 * k * r.g_tilde * r.g_tilde / r.omega_g.powi(3) + 2.0 * p.coupling.c() / r.omega_g)
}

/// `M₂² − ε(g)`, a lower bound on the bare ground-state photon number.
pub fn bare_lower_bound(p: &ModelParams) -> Result<f64> {
    let eps = bare_epsilon(p)?;
    let r = renormalize(p);
    Ok(r.m2 * r.m2 - eps)
}

/// `N₀^bare = (M₁² + M₂²) N₀^ren + M₂² + M₁M₂⟨a² + a†²⟩_ren`.
pub fn bare_number_from_ren(r: &RenormalizedParams, n0_ren: f64, pair_ren: f64) -> f64 {
    (r.m1 * r.m1 + r.m2 * r.m2) * n0_ren + r.m2 * r.m2 + r.m1 * r.m2 * pair_ren
}

/// Bare photon number obtained by diagonalizing `H_{A²}` itself.
pub fn bare_number_direct(p: &ModelParams, policy: &TruncationPolicy) -> Result<f64> {
    let ms = model_spectrum(p, &policy.levels(policy.m_levels.max(1)), true)?;
    number_expectation(ms.ground_state().expect("vectors requested"))
}

/// Unit-norm truncation of `(|+⟩|−α⟩ − |−⟩|α⟩)/√2` at Fock cutoff `cutoff`,
/// with `α = g/ω_c` and `|±⟩` the σ_x eigenstates.
pub fn coherent_approximant(p: &ModelParams, cutoff: usize) -> Vec<f64> {
    let alpha = p.g / p.omega_c;
    let mut out = vec![0.0; 2 * (cutoff + 1)];
    let mut c = (-0.5 * alpha * alpha).exp();
    for n in 0..=cutoff {
        if n > 0 {
            c *= alpha / (n as f64).sqrt();
        }
        if n % 2 == 0 {
            out[2 * n + 1] = c;
        } else {
            out[2 * n] = -c;
        }
    }
    let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
    out.iter_mut().for_each(|x| *x /= norm);
    out
}

/// `|⟨approx|E₀⟩|²` against the coherent-state approximation.
pub fn coherent_overlap(ground_state: &[f64], p: &ModelParams) -> Result<f64> {
    if p.epsilon != 0.0 {
        return Err(invalid("epsilon", "coherent approximation needs epsilon = 0"));
    }
    if !p.coupling.is_none() {
        return Err(invalid("coupling.C", "coherent approximation needs C = 0"));
    }
    let cutoff = fock_cutoff(ground_state)?;
    let approx = coherent_approximant(p, cutoff);
    let o: f64 = approx.iter().zip(ground_state).map(|(a, b)| a * b).sum();
    Ok((o * o).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    /// Some `(n*, s*)` with `n* > 0` and weight above the threshold.
    pub excited: Option<(usize, usize)>,
    pub vacuum_weight: f64,
    /// `vacuum_weight ≥ 1 − N₀ − tol`.
    pub vacuum_ok: bool,
}

/// Coefficient-existence checks on a normalized ground state.
pub fn entanglement_witness(ground_state: &[f64]) -> Result<Witness> {
    fock_cutoff(ground_state)?;
    let mut excited = None;
    let mut best = WITNESS_THRESHOLD;
    for (i, c) in ground_state.iter().enumerate().skip(2) {
        if c * c > best {
            best = c * c;
            excited = Some((i / 2, i % 2));
        }
    }
    let vacuum_weight = ground_state[0].powi(2) + ground_state[1].powi(2);
    let n0: f64 = ground_state.iter().enumerate().map(|(i, c)| (i / 2) as f64 * c * c).sum();
    Ok(Witness {
        excited,
        vacuum_weight,
        vacuum_ok: vacuum_weight >= 1.0 - n0 - TAIL_LIMIT,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateReport {
    pub e0: f64,
    pub e1: f64,
    pub n0_ren: f64,
    pub n0_bare: f64,
    pub delta_phi_sq: f64,
    pub parity: Option<i8>,
    pub upper_bound_ren: f64,
    pub lower_bound_ren: f64,
    pub bare_lower_bound: Option<f64>,
    pub gse_lower: f64,
    pub gse_upper: f64,
    pub coherent_overlap: Option<f64>,
    pub witness: Witness,
    pub truncation_used: usize,
}

impl GroundStateReport {
    /// Every bound that applies here holds within [`BOUND_SLACK`].
    pub fn sandwich_ok(&self) -> bool {
        let s = BOUND_SLACK;
        let photons = self.n0_ren <= self.upper_bound_ren + s && self.n0_ren + s >= self.lower_bound_ren;
        let energy = self.gse_lower - s <= self.e0 && self.e0 <= self.gse_upper + s;
        let bare = self.bare_lower_bound.is_none_or(|b| self.n0_bare + s >= b);
        photons && energy && bare
    }
}

/// Ground-state observables of `H_{A²}` at `p`, computed in the
/// renormalized representation. At least two levels are converged.
pub fn ground_state_report(p: &ModelParams, policy: &TruncationPolicy) -> Result<GroundStateReport> {
    p.validate()?;
    let r = renormalize(p);
    let q = p.renormalized_model();
    let ms = model_spectrum(&q, &policy.levels(policy.m_levels.max(2)), true)?;
    let ground = ms.ground_state().expect("vectors requested");
    let n0_ren = number_expectation(ground)?;
    let pair = pair_expectation(ground)?;
    let (upper_bound_ren, lower_bound_ren) = ren_photon_bounds(p);
    let (gse_lower, gse_upper) = ground_energy_bounds(p);
    let bare = if p.coupling.is_none() || p.coupling.ell() == 0 {
        None
    } else {
        Some(bare_lower_bound(p)?)
    };
    let overlap = if p.epsilon == 0.0 && p.coupling.is_none() {
        Some(coherent_overlap(ground, p)?)
    } else {
        None
    };
    Ok(GroundStateReport {
        e0: ms.spectrum.eigenvalues[0],
        e1: ms.spectrum.eigenvalues[1],
        n0_ren,
        n0_bare: bare_number_from_ren(&r, n0_ren, pair),
        delta_phi_sq: field_fluctuation(ground, r.omega_g)?,
        parity: ms.ground_parity().map(|p| p.sign() as i8),
        upper_bound_ren,
        lower_bound_ren,
        bare_lower_bound: bare,
        gse_lower,
        gse_upper,
        coherent_overlap: overlap,
        witness: entanglement_witness(ground)?,
        truncation_used: ms.spectrum.truncation_used,
    })
}
