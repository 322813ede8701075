//! Frozen reference angles for the symmetric families.
//!
//! Values were computed once with a 30-digit root finder on the same
//! mirror-symmetric force balance and are independent of this crate.

#![allow(clippy::excessive_precision, clippy::approx_constant)]

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use locus_core::oracles::{direct_potential, solve_a2_family, solve_c2_family};
use locus_core::{cm_potential, solve_equilibrium, ChargedEnsemble, MultiplicityList, SolverConfig};

const A2_PHI: [f64; 5] = [
    2.0943951023931954923,
    2.3005239830218629827,
    2.4188584057763776273,
    2.4980915447965088517,
    2.5559071101326422788,
];

// C2_PHI[m - 1][l - 1]
const C2_PHI: [[f64; 4]; 4] = [
    [1.5707963267948966192, 1.3181160716528179657, 1.1592794807274085998, 1.0471975511965977462],
    [1.8234765819369752727, 1.5707963267948966192, 1.4033482475752072887, 1.2810446253588491483],
    [1.9823131728623846386, 1.7382444060145859498, 1.5707963267948966192, 1.4454684956268312224],
    [2.0943951023931954923, 1.8605480282309440902, 1.6961241579629620161, 1.5707963267948966192],
];

#[test]
fn a2_bisection_matches_reference() {
    for (m, want) in (1..=5).zip(A2_PHI) {
        let phi = solve_a2_family(m).unwrap();
        assert!((phi - want).abs() < 1e-13, "m={m}: {phi} vs {want}");
    }
}

#[test]
fn c2_bisection_matches_reference() {
    for m in 1..=4u32 {
        for l in 1..=4u32 {
            let (phi, psi) = solve_c2_family(m, l).unwrap();
            let want = C2_PHI[m as usize - 1][l as usize - 1];
            assert!((phi - want).abs() < 1e-13, "({m},{l}): {phi} vs {want}");
            assert_eq!(psi, PI);
        }
    }
    // mirror pairs: swapping m and l reflects φ about π/2
    for m in 1..=4usize {
        for l in 1..=4usize {
            assert!((C2_PHI[m - 1][l - 1] + C2_PHI[l - 1][m - 1] - PI).abs() < 1e-15);
        }
    }
}

#[test]
fn solver_reproduces_reference_angles() {
    for (m, want) in (1..=5).zip(A2_PHI) {
        let r = solve_equilibrium(&MultiplicityList::new(vec![m, 1, 1]).unwrap(), &SolverConfig::default()).unwrap();
        let t = r.arrangement.thetas();
        assert!((t[1] - want).abs() < 1e-10 && (t[2] - (TAU - want)).abs() < 1e-10, "{t:?}");
    }
    let r = solve_equilibrium(&MultiplicityList::new(vec![3, 1, 3, 1]).unwrap(), &SolverConfig::default()).unwrap();
    assert!((r.arrangement.thetas()[1] - FRAC_PI_2).abs() < 1e-10);
}

#[test]
fn potential_at_a2_equilibrium() {
    // (6, 2, 2) at (0, φ*, 2π − φ*): μ = 72 to 30 digits
    let phi = solve_a2_family(2).unwrap();
    let e = ChargedEnsemble::new(vec![0.0, phi, TAU - phi], vec![6, 2, 2]).unwrap();
    let mu = cm_potential(&e).unwrap();
    let direct = direct_potential(e.thetas(), &[6.0, 2.0, 2.0]).unwrap();
    assert!((mu - direct).abs() < 1e-12 * direct);
    assert!((mu - 72.0).abs() < 1e-12 * 72.0);
}
