//! Spectra and ground-state photon observables of the generalized quantum
//! Rabi model with an A²-term, by truncated Fock-space diagonalization.
//!
//! ```
//! use qrabi::{model::ModelParams, observables::model_spectrum, hamiltonian::TruncationPolicy};
//!
//! let p = ModelParams::rabi(1.0, 0.0, 1.0, 0.5).unwrap();
//! let s = model_spectrum(&p, &TruncationPolicy::with_levels(2), false).unwrap();
//! assert!(s.spectrum.eigenvalues[0] < s.spectrum.eigenvalues[1]);
//! ```

pub mod eigen;
pub mod error;
pub mod hamiltonian;
pub mod jc;
pub mod model;
pub mod observables;
pub mod pair_theory;
pub mod sweep;

pub use error::{Error, Result};
