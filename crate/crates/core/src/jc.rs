//! Closed-form Jaynes–Cummings spectrum for a resonant atom and cavity.

use crate::error::{invalid, Error, Result};

/// What a Jaynes–Cummings eigenstate looks like.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JcState {
    /// `|↓,0⟩`.
    SeparableVacuum,
    /// `(|↑,n⟩ ± |↓,n+1⟩)/√2`.
    Entangled { n: usize, sign: i8 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcLevel {
    /// `0` for the vacuum, `±(n+1)` for the doublet built on `|↑,n⟩`.
    pub index: i64,
    pub energy: f64,
    pub state: JcState,
}

const THRESHOLD_RTOL: f64 = 1e-12;

fn check(omega: f64, g: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(invalid("omega", format!("must be > 0, got {omega}")));
    }
    if !(g.is_finite() && g >= 0.0) {
        return Err(invalid("g", format!("must be >= 0, got {g}")));
    }
    Ok(())
}

/// Coupling at which `φ_{−(n+1)}` takes over the ground state: `(√(n+1)+√n)ω`.
pub fn crossing_threshold(omega: f64, n: usize) -> f64 {
    (((n + 1) as f64).sqrt() + (n as f64).sqrt()) * omega
}

/// Levels `E_0 = 0` and `E_{±(n+1)} = ω(n+1) ± g√(n+1)` for `n = 0..=max_n`,
/// ascending in energy (ties broken by index).
pub fn jc_spectrum(omega: f64, g: f64, max_n: usize) -> Result<Vec<JcLevel>> {
    check(omega, g)?;
    let mut levels = vec![JcLevel {
        index: 0,
        energy: 0.0,
        state: JcState::SeparableVacuum,
    }];
    for n in 0..=max_n {
        let base = omega * (n + 1) as f64;
        let split = g * ((n + 1) as f64).sqrt();
        let label = (n + 1) as i64;
        for sign in [-1i8, 1] {
            levels.push(JcLevel {
                index: label * i64::from(sign),
                energy: base + f64::from(sign) * split,
                state: JcState::Entangled { n, sign },
            });
        }
    }
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.index.cmp(&b.index)));
    Ok(levels)
}

/// Index of the unique ground state: `0` below `ω`, `−(n+1)` between the
/// n-th and (n+1)-th crossing thresholds. Exact thresholds are `Degenerate`.
pub fn jc_ground_index(omega: f64, g: f64) -> Result<i64> {
    check(omega, g)?;
    let mut below = 0i64;
    let mut n = 0usize;
    loop {
        let t = crossing_threshold(omega, n);
        if (g - t).abs() <= THRESHOLD_RTOL * t {
            return Err(Error::Degenerate { g });
        }
        if t > g {
            return Ok(-below);
        }
        below += 1;
        n += 1;
    }
}
