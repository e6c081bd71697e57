//! Elimination of the A²-term by a Bogoliubov squeeze of the cavity mode,
//! and the checks it makes possible.

use crate::eigen::eigen_adaptive;
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{build_full, TruncationPolicy};
use crate::model::{renormalize, ModelParams, RenormalizedParams};

/// Largest norm loss tolerated when changing oscillator basis.
pub const TAIL_LIMIT: f64 = 1e-10;

/// Overlaps `S[m][n] = ⟨φ_m|ψ_n⟩` between the Fock states `φ` of the
/// frequency-ω_c oscillator and `ψ` of the frequency-ω_g oscillator,
/// for `m, n ≤ cutoff`.
pub fn overlap_matrix(r: &RenormalizedParams, cutoff: usize) -> Vec<Vec<f64>> {
    let dim = cutoff + 1;
    let cosh = r.m1;
    let tanh = -r.m2 / r.m1;
    let mut s = vec![vec![0.0; dim]; dim];
    s[0][0] = 1.0 / cosh.sqrt();
    for m in 1..dim {
        if m >= 2 {
            s[m][0] = -tanh * ((m - 1) as f64 / m as f64).sqrt() * s[m - 2][0];
        }
    }
    for n in 0..dim - 1 {
        for m in 0..dim {
            let from_m = if m > 0 { (m as f64).sqrt() * s[m - 1][n] / cosh } else { 0.0 };
            let from_n = if n > 0 { tanh * (n as f64).sqrt() * s[m][n - 1] } else { 0.0 };
            s[m][n + 1] = (from_m + from_n) / ((n + 1) as f64).sqrt();
        }
    }
    s
}

fn check_tail(d: &[f64]) -> Result<()> {
    let mass = 1.0 - d.iter().map(|x| x * x).sum::<f64>();
    if mass > TAIL_LIMIT {
        return Err(Error::TailMass {
            mass,
            limit: TAIL_LIMIT,
        });
    }
    Ok(())
}

fn check_normalized(c: &[f64]) -> Result<()> {
    let n2: f64 = c.iter().map(|x| x * x).sum();
    if (n2 - 1.0).abs() > 1e-8 {
        return Err(invalid("state", format!("not normalized, norm² = {n2}")));
    }
    Ok(())
}

/// Coefficients over the ω_g Fock basis of the state with coefficients
/// `bare` over the ω_c Fock basis; same cutoff on both sides.
pub fn physical_from_bare(bare: &[f64], r: &RenormalizedParams) -> Result<Vec<f64>> {
    check_normalized(bare)?;
    let s = overlap_matrix(r, bare.len() - 1);
    let d: Vec<f64> = (0..bare.len())
        .map(|n| bare.iter().enumerate().map(|(m, c)| s[m][n] * c).sum())
        .collect();
    check_tail(&d)?;
    Ok(d)
}

/// Inverse of [`physical_from_bare`].
pub fn bare_from_physical(physical: &[f64], r: &RenormalizedParams) -> Result<Vec<f64>> {
    check_normalized(physical)?;
    let s = overlap_matrix(r, physical.len() - 1);
    let c: Vec<f64> = s
        .iter()
        .map(|row| row.iter().zip(physical).map(|(a, b)| a * b).sum())
        .collect();
    check_tail(&c)?;
    Ok(c)
}

/// Applies [`physical_from_bare`] to each spin component of an interleaved
/// spin⊗Fock state.
pub fn physical_from_bare_spin(state: &[f64], r: &RenormalizedParams) -> Result<Vec<f64>> {
    check_normalized(state)?;
    let dim = state.len() / 2;
    let s = overlap_matrix(r, dim - 1);
    let mut out = vec![0.0; state.len()];
    for spin in 0..2 {
        for n in 0..dim {
            out[2 * n + spin] = (0..dim).map(|m| s[m][n] * state[2 * m + spin]).sum();
        }
    }
    check_tail(&out)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceReport {
    pub levels_compared: usize,
    pub max_abs_deviation: f64,
    pub n_direct: usize,
    pub n_renormalized: usize,
}

/// Compares the lowest `levels` eigenvalues of `H_{A²}` with those of the
/// renormalized `H(ω_a, ε, ω_g, g̃)`, each converged on its own.
pub fn check_unitary_equivalence(p: &ModelParams, levels: usize, policy: &TruncationPolicy) -> Result<EquivalenceReport> {
    if levels < 1 {
        return Err(invalid("levels", "must be >= 1"));
    }
    let policy = policy.levels(levels);
    let q = p.renormalized_model();
    let direct = eigen_adaptive(|n| build_full(p, n), &policy, false)?;
    let ren = eigen_adaptive(|n| build_full(&q, n), &policy, false)?;
    let max_abs_deviation = direct
        .eigenvalues
        .iter()
        .zip(&ren.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(EquivalenceReport {
        levels_compared: levels,
        max_abs_deviation,
        n_direct: direct.truncation_used,
        n_renormalized: ren.truncation_used,
    })
}

/// Lower and upper bounds on the ground-state energy:
/// `−½√(ω_a²+ε²) + ω_g/2 − g̃²/ω_g` and the same with the atom term damped
/// by `exp(−2g̃²/ω_g²)`.
pub fn ground_energy_bounds(p: &ModelParams) -> (f64, f64) {
    let r = renormalize(p);
    let shift = 0.5 * r.omega_g - r.g_tilde * r.g_tilde / r.omega_g;
    let atom = 0.5 * p.atom_splitting();
    let damping = (-2.0 * r.displacement().powi(2)).exp();
    (shift - atom, shift - atom * damping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CouplingLaw;

    fn squeezed(omega_c: f64, omega_g: f64) -> RenormalizedParams {
        let down = (omega_c / omega_g).sqrt();
        let up = (omega_g / omega_c).sqrt();
        RenormalizedParams {
            omega_g,
            g_tilde: 0.0,
            m1: 0.5 * (down + up),
            m2: 0.5 * (down - up),
        }
    }

    #[test]
    fn identity_without_squeeze() {
        let r = squeezed(1.0, 1.0);
        let s = overlap_matrix(&r, 6);
        for (m, row) in s.iter().enumerate() {
            for (n, &v) in row.iter().enumerate() {
                assert_eq!(v, if m == n { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn vacuum_overlap() {
        let (oc, og) = (0.75, 1.6);
        let r = squeezed(oc, og);
        let mut vac = vec![0.0; 60];
        vac[0] = 1.0;
        let d = physical_from_bare(&vac, &r).unwrap();
        assert!((d[0] * d[0] - 2.0 * (oc * og).sqrt() / (oc + og)).abs() < 1e-14);
        assert!(d.iter().skip(1).step_by(2).all(|&x| x == 0.0));
    }

    #[test]
    fn tail_mass_detected() {
        let r = squeezed(1.0, 30.0);
        let mut vac = vec![0.0; 6];
        vac[0] = 1.0;
        assert!(matches!(physical_from_bare(&vac, &r), Err(Error::TailMass { .. })));
    }

    #[test]
    fn energy_bounds_examples() {
        let p = ModelParams::rabi(1.0, 0.0, 1.0, 1.0).unwrap();
        let (lo, hi) = ground_energy_bounds(&p);
        assert!((lo + 1.0).abs() < 1e-15);
        assert!((hi - (-0.5 * (-2f64).exp() - 0.5)).abs() < 1e-15);
        let p = ModelParams::rabi(0.3, 0.4, 0.8, 0.0).unwrap();
        let (lo, hi) = ground_energy_bounds(&p);
        assert_eq!(lo, hi);
        assert!((lo - (-0.25 + 0.4)).abs() < 1e-15);
    }

    #[test]
    fn equivalence_is_exact_without_a2() {
        let p = ModelParams::rabi(0.1, 0.0, 0.75, 1.0).unwrap();
        let rep = check_unitary_equivalence(&p, 4, &TruncationPolicy::default()).unwrap();
        assert_eq!(rep.max_abs_deviation, 0.0);
        assert_eq!(rep.n_direct, rep.n_renormalized);
    }

    #[test]
    fn equivalence_rejects_zero_levels() {
        let p = ModelParams::new(0.1, 0.0, 0.75, 1.0, CouplingLaw::new(0.1, 1).unwrap()).unwrap();
        assert!(check_unitary_equivalence(&p, 0, &TruncationPolicy::default()).is_err());
    }
}
