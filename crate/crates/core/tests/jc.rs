use proptest::prelude::*;
use qrabi::eigen::{eigen_banded, eigen_tridiagonal};
use qrabi::hamiltonian::{build_jaynes_cummings_block, build_jaynes_cummings_full};
use qrabi::jc::{crossing_threshold, jc_ground_index, jc_spectrum, JcState};
use qrabi::Error;

/// Closed-form levels of the truncated matrix: the ladder below the cutoff
/// plus the uncoupled `|↑,N⟩`.
fn truncated_closed_form(omega: f64, g: f64, cutoff: usize) -> Vec<f64> {
    let mut e: Vec<f64> = jc_spectrum(omega, g, cutoff - 1).unwrap().iter().map(|l| l.energy).collect();
    e.push(omega * (cutoff + 1) as f64);
    e.sort_by(f64::total_cmp);
    e
}

#[test]
fn truncated_matrix_matches_ladder() {
    for x in [0.5, 1.5, 2.5] {
        let cutoff = 21;
        let m = build_jaynes_cummings_full(1.0, x, cutoff).unwrap();
        let s = eigen_banded(&m, false).unwrap();
        let want = truncated_closed_form(1.0, x, cutoff);
        let dev = s.eigenvalues.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(dev <= 1e-12, "g={x}: {dev:e}");
    }
}

#[test]
fn doublet_blocks() {
    let cases = [(0.0, 0, [1.0, 1.0]), (0.5, 0, [0.5, 1.5]), (1.5, 1, [2.0 - 1.5 * 2f64.sqrt(), 2.0 + 1.5 * 2f64.sqrt()])];
    for (g, n, want) in cases {
        let s = eigen_tridiagonal(&build_jaynes_cummings_block(1.0, g, n).unwrap(), false).unwrap();
        for (a, b) in s.eigenvalues.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}

#[test]
fn staircase_thresholds() {
    for n in 0..=3 {
        let t = crossing_threshold(1.0, n);
        assert!(matches!(jc_ground_index(1.0, t), Err(Error::Degenerate { .. })));
        assert_eq!(jc_ground_index(1.0, t * (1.0 - 1e-6)).unwrap(), -(n as i64));
        assert_eq!(jc_ground_index(1.0, t * (1.0 + 1e-6)).unwrap(), -(n as i64) - 1);
    }
}

#[test]
fn ground_level_is_lowest_of_spectrum() {
    for g in [0.3, 1.2, 2.2, 2.9, 3.5] {
        let s = jc_spectrum(1.0, g, 30).unwrap();
        assert_eq!(s[0].index, jc_ground_index(1.0, g).unwrap());
        if s[0].index == 0 {
            assert_eq!(s[0].state, JcState::SeparableVacuum);
        }
    }
}

proptest! {
    #[test]
    fn ground_index_is_nonincreasing(omega in 0.2f64..3.0, g1 in 0.0f64..10.0, dg in 0.0f64..3.0) {
        let a = jc_ground_index(omega, g1);
        let b = jc_ground_index(omega, g1 + dg);
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!(b <= a);
        }
    }

    #[test]
    fn levels_follow_closed_form(omega in 0.2f64..3.0, g in 0.0f64..5.0) {
        for l in jc_spectrum(omega, g, 12).unwrap() {
            match l.state {
                JcState::SeparableVacuum => prop_assert_eq!(l.energy, 0.0),
                JcState::Entangled { n, sign } => {
                    let want = omega * (n + 1) as f64 + f64::from(sign) * g * ((n + 1) as f64).sqrt();
                    prop_assert!((l.energy - want).abs() < 1e-12);
                    prop_assert_eq!(l.index, i64::from(sign) * (n as i64 + 1));
                }
            }
        }
    }
}
