//! Model parameters, the A²-coupling law and the Hopfield–Bogoliubov
//! renormalization of the cavity mode.
//!
//! All energies are in units with ħ = 1.

use crate::error::{invalid, Result};

/// Strength of the A²-term as a function of the coupling: `C_g = C · g^ell`.
///
/// `ell = 0` together with `C = 0` is the plain Rabi model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingLaw {
    c: f64,
    ell: u8,
}

impl CouplingLaw {
    pub fn new(c: f64, ell: u8) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(invalid("coupling.C", format!("must be finite and >= 0, got {c}")));
        }
        if ell > 2 {
            return Err(invalid("coupling.ell", format!("must be 0, 1 or 2, got {ell}")));
        }
        Ok(Self { c, ell })
    }

    /// No A²-term.
    pub const fn none() -> Self {
        Self { c: 0.0, ell: 0 }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn ell(&self) -> u8 {
        self.ell
    }

    pub fn is_none(&self) -> bool {
        self.c == 0.0
    }

    /// `C · g^ell`.
    pub fn value(&self, g: f64) -> f64 {
        self.c * g.powi(i32::from(self.ell))
    }
}

impl Default for CouplingLaw {
    fn default() -> Self {
        Self::none()
    }
}

/// `C_g(g) = C · g^ell`.
pub fn coupling_value(law: CouplingLaw, g: f64) -> f64 {
    law.value(g)
}

/// Parameters of `H = (ω_a/2)σ_z − (ε/2)σ_x + ω_c(a†a + ½) + g σ_x(a + a†) + C_g g (a + a†)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega_a: f64,
    pub epsilon: f64,
    pub omega_c: f64,
    pub g: f64,
    pub coupling: CouplingLaw,
}

impl ModelParams {
    /// Plain Rabi parameters (no A²-term), validated.
    pub fn rabi(omega_a: f64, epsilon: f64, omega_c: f64, g: f64) -> Result<Self> {
        Self::new(omega_a, epsilon, omega_c, g, CouplingLaw::none())
    }

    pub fn new(omega_a: f64, epsilon: f64, omega_c: f64, g: f64, coupling: CouplingLaw) -> Result<Self> {
        let p = Self {
            omega_a,
            epsilon,
            omega_c,
            g,
            coupling,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_c.is_finite() && self.omega_c > 0.0) {
            return Err(invalid("omega_c", format!("must be > 0, got {}", self.omega_c)));
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return Err(invalid("g", format!("must be >= 0, got {}", self.g)));
        }
        if !(self.omega_a.is_finite() && self.omega_a >= 0.0) {
            return Err(invalid("omega_a", format!("must be >= 0, got {}", self.omega_a)));
        }
        if !self.epsilon.is_finite() {
            return Err(invalid("epsilon", "must be finite"));
        }
        Ok(())
    }

    pub fn with_g(self, g: f64) -> Self {
        Self { g, ..self }
    }

    /// `C_g` at this coupling.
    pub fn a2_strength(&self) -> f64 {
        self.coupling.value(self.g)
    }

    /// `√(ω_a² + ε²)`, the bare atom splitting.
    pub fn atom_splitting(&self) -> f64 {
        self.omega_a.hypot(self.epsilon)
    }

    /// The C = 0 Hamiltonian `H(ω_a, ε, ω_g, g̃)` unitarily equivalent to this one.
    pub fn renormalized_model(&self) -> ModelParams {
        let r = renormalize(self);
        ModelParams {
            omega_a: self.omega_a,
            epsilon: self.epsilon,
            omega_c: r.omega_g,
            g: r.g_tilde,
            coupling: CouplingLaw::none(),
        }
    }
}

/// Cavity frequency and coupling after absorbing the A²-term, plus the
/// Bogoliubov coefficients `a = m1·b + m2·b†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenormalizedParams {
    pub omega_g: f64,
    pub g_tilde: f64,
    pub m1: f64,
    pub m2: f64,
}

impl RenormalizedParams {
    /// Squeeze parameter `r = ½ ln(ω_g/ω_c)`; `m1 = cosh r`, `m2 = −sinh r`.
    pub fn squeeze(&self) -> f64 {
        // m1 - m2 = sqrt(ω_g/ω_c)
        (self.m1 - self.m2).ln()
    }

    /// `g̃/ω_g`, the displacement of the renormalized oscillator.
    pub fn displacement(&self) -> f64 {
        self.g_tilde / self.omega_g
    }
}

pub fn renormalize(p: &ModelParams) -> RenormalizedParams {
    let k = p.a2_strength() * p.g;
    if k == 0.0 {
        return RenormalizedParams {
            omega_g: p.omega_c,
            g_tilde: p.g,
            m1: 1.0,
            m2: 0.0,
        };
    }
    let omega_g = (p.omega_c * p.omega_c + 4.0 * k * p.omega_c).sqrt();
    let down = (p.omega_c / omega_g).sqrt();
    let up = (omega_g / p.omega_c).sqrt();
    RenormalizedParams {
        omega_g,
        g_tilde: p.g * down,
        m1: 0.5 * (down + up),
        m2: 0.5 * (down - up),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn coupling_law_values() {
        assert!((coupling_value(CouplingLaw::new(0.1, 1).unwrap(), 2.0) - 0.2).abs() < 1e-15);
        assert_eq!(coupling_value(CouplingLaw::new(0.0, 0).unwrap(), 5.0), 0.0);
        assert!((coupling_value(CouplingLaw::new(0.1, 2).unwrap(), 3.0) - 0.9).abs() < 1e-15);
    }

    #[test]
    fn coupling_law_rejects_bad_input() {
        assert!(CouplingLaw::new(0.1, 3).is_err());
        assert!(CouplingLaw::new(-0.1, 1).is_err());
        assert!(CouplingLaw::new(f64::NAN, 1).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::rabi(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(ModelParams::rabi(1.0, 0.0, 1.0, -1.0).is_err());
        assert!(ModelParams::rabi(-1.0, 0.0, 1.0, 1.0).is_err());
        assert!(ModelParams::rabi(1.0, -0.3, 1.0, 1.0).is_ok());
    }

    #[test]
    fn renormalize_identity_without_a2() {
        let p = ModelParams::rabi(1.0, 0.0, 1.0, 1.7).unwrap();
        let r = renormalize(&p);
        assert_eq!(r.omega_g, 1.0);
        assert_eq!(r.g_tilde, 1.7);
        assert_eq!((r.m1, r.m2), (1.0, 0.0));
    }

    #[test]
    fn renormalize_closed_forms() {
        // C_g = 0.5 * 2 = 1 → ω_g = √(1 + 4·1·2·1) = 3
        let p = ModelParams::new(1.0, 0.0, 1.0, 2.0, CouplingLaw::new(0.5, 1).unwrap()).unwrap();
        let r = renormalize(&p);
        assert!((r.omega_g - 3.0).abs() < 1e-14);
        assert!((r.g_tilde - 2.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((r.m1 - 1.154_700_538_379_251_5).abs() < 1e-14);
        assert!((r.m2 + 0.577_350_269_189_625_8).abs() < 1e-14);
        assert!((r.m1 * r.m1 - r.m2 * r.m2 - 1.0).abs() < 1e-14);

        let p = ModelParams::new(0.1, 0.0, 0.75, 1.0, CouplingLaw::new(0.1, 2).unwrap()).unwrap();
        let r = renormalize(&p);
        assert!((r.omega_g - 0.8625f64.sqrt()).abs() < 1e-15);
        assert!((r.g_tilde - (0.75 / 0.8625f64.sqrt()).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn squeeze_parameter() {
        let p = ModelParams::new(1.0, 0.0, 1.0, 2.0, CouplingLaw::new(0.5, 1).unwrap()).unwrap();
        let r = renormalize(&p);
        assert!((r.squeeze() - 0.5 * 3f64.ln()).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn bogoliubov_coefficients_preserve_ccr(
            oc in 0.1f64..3.0, g in 0.0f64..4.0, c in 0.0f64..1.0, ell in 0u8..=2
        ) {
            let p = ModelParams::new(0.5, 0.0, oc, g, CouplingLaw::new(c, ell).unwrap()).unwrap();
            let r = renormalize(&p);
            prop_assert!((r.m1 * r.m1 - r.m2 * r.m2 - 1.0).abs() < 1e-14 * r.m1 * r.m1);
            prop_assert!(r.m1 >= 1.0 && r.m2 <= 0.0);
            prop_assert!(r.omega_g >= oc);
            prop_assert!(r.g_tilde <= g);
        }

        #[test]
        fn omega_g_monotone(
            oc in 0.1f64..3.0, g in 0.01f64..4.0, c in 0.0f64..1.0, dc in 0.0f64..0.5,
            dg in 0.0f64..1.0, ell in 1u8..=2
        ) {
            let law = CouplingLaw::new(c, ell).unwrap();
            let base = renormalize(&ModelParams::new(0.5, 0.0, oc, g, law).unwrap()).omega_g;
            let more_c = renormalize(&ModelParams::new(0.5, 0.0, oc, g, CouplingLaw::new(c + dc, ell).unwrap()).unwrap()).omega_g;
            let more_g = renormalize(&ModelParams::new(0.5, 0.0, oc, g + dg, law).unwrap()).omega_g;
            prop_assert!(more_c >= base);
            prop_assert!(more_g >= base);
        }
    }
}
