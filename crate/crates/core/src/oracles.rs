//! Independent checks for the solver and the force kernel.
//!
//! Nothing here calls the gradient or Hessian kernels: the finite-difference
//! gradient sums the potential itself, and the family oracles reduce the
//! equilibrium to one scalar equation under a mirror-symmetric ansatz and
//! solve it by bisection. The reduction is legitimate because the
//! equilibrium is unique up to rotation, so it must be fixed by every mirror
//! symmetry of the multiplicity list; searching inside the fixed locus finds it.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arrangement::{ChargedEnsemble, MultiplicityList};
use crate::error::{Error, Result};
use crate::solver::{canonical_rotation, solve_equilibrium, Initializer, SolverConfig};

/// Minimum cyclic gap of random starting configurations.
pub const RANDOM_MIN_GAP: f64 = 1e-3;
/// Step of the central-difference gradient.
pub const FD_STEP: f64 = 1e-6;

/// `Σ_{i≠j} q_i q_j / sin²((θ_j − θ_i)/2)` summed directly over ordered pairs.
pub fn direct_potential(thetas: &[f64], charges: &[f64]) -> Result<f64> {
    let n = thetas.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let s = ((thetas[j] - thetas[i]) / 2.0).sin();
            if s.abs() < crate::COLLISION_THRESHOLD {
                return Err(Error::Collision { i, j, sin_half: s });
            }
            total += charges[i] * charges[j] / s.powi(2);
        }
    }
    Ok(total)
}

/// Central differences `(μ(θ_i + h) − μ(θ_i − h)) / 2h` of the potential.
pub fn fd_gradient(e: &ChargedEnsemble, h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(Error::Config(format!("step must be positive, got {h}")));
    }
    let t = e.thetas();
    let n = t.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (t[j] - t[i]).rem_euclid(TAU);
            if d.min(TAU - d) <= 10.0 * h {
                return Err(Error::InvalidEnsemble(format!(
                    "particles {i} and {j} are closer than 10h"
                )));
            }
        }
    }
    let q: Vec<f64> = e.charges().iter().map(|&c| c as f64).collect();
    (0..n)
        .map(|i| {
            let mut plus = t.to_vec();
            let mut minus = t.to_vec();
            plus[i] += h;
            minus[i] -= h;
            Ok((direct_potential(&plus, &q)? - direct_potential(&minus, &q)?) / (2.0 * h))
        })
        .collect()
}

/// Scalar root-finding problem with a sign change on `[lo, hi]`.
pub struct BisectionProblem<F> {
    pub residual: F,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl<F: Fn(f64) -> f64> BisectionProblem<F> {
    pub fn new(residual: F, lo: f64, hi: f64) -> Self {
        Self { residual, lo, hi, tol: 1e-14 }
    }

    /// Halves the bracket until it is narrower than `tol` or stops shrinking.
    pub fn solve(&self) -> Result<f64> {
        let (mut lo, mut hi) = (self.lo, self.hi);
        let f_lo = (self.residual)(lo);
        let f_hi = (self.residual)(hi);
        if !(f_lo.signum() * f_hi.signum() < 0.0) {
            return Err(Error::Bracket { lo, hi, f_lo, f_hi });
        }
        let lo_negative = f_lo < 0.0;
        while hi - lo > self.tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f = (self.residual)(mid);
            if f == 0.0 {
                return Ok(mid);
            }
            if (f < 0.0) == lo_negative {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `cos(x) / sin³(x)`.
fn cot_csc2(x: f64) -> f64 {
    x.cos() / x.sin().powi(3)
}

fn charge(m: u32) -> f64 {
    f64::from(m) * (f64::from(m) + 1.0)
}

const BRACKET_MARGIN: f64 = 1e-6;

/// Force balance at particle 1 of `(0, φ, 2π − φ)` with charges `(q, 2, 2)`.
pub fn a2_residual(q: f64, phi: f64) -> f64 {
    // neighbour at 0: half-difference −φ/2; neighbour at 2π − φ: π − φ
    -q * cot_csc2(phi / 2.0) + 2.0 * cot_csc2(PI - phi)
}

/// Angle `φ*` of the `(m, 1, 1)` equilibrium `(0, φ*, 2π − φ*)`.
pub fn solve_a2_family(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidMultiplicities("m must be positive".into()));
    }
    let q = charge(m);
    BisectionProblem::new(|phi| a2_residual(q, phi), BRACKET_MARGIN, PI - BRACKET_MARGIN).solve()
}

/// Force balance at particle 1 of `(0, φ, π, 2π − φ)` with charges
/// `(q_m, 2, q_l, 2)`.
pub fn c2_residual(qm: f64, ql: f64, phi: f64) -> f64 {
    -qm * cot_csc2(phi / 2.0) + ql * cot_csc2((PI - phi) / 2.0) + 2.0 * cot_csc2(PI - phi)
}

/// `(φ*, π)` for the `(m, 1, l, 1)` equilibrium `(0, φ*, π, 2π − φ*)`.
pub fn solve_c2_family(m: u32, l: u32) -> Result<(f64, f64)> {
    if m == 0 || l == 0 {
        return Err(Error::InvalidMultiplicities("m and l must be positive".into()));
    }
    let (qm, ql) = (charge(m), charge(l));
    let phi = BisectionProblem::new(
        |phi| c2_residual(qm, ql, phi),
        BRACKET_MARGIN,
        PI - BRACKET_MARGIN,
    )
    .solve()?;
    Ok((phi, PI))
}

/// Sorted uniform angles on `(0, 2π)` with the first reset to zero,
/// resampled until every cyclic gap exceeds [`RANDOM_MIN_GAP`].
pub fn random_ordered_angles<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut t: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
        t.sort_by(f64::total_cmp);
        t[0] = 0.0;
        let ok = t.windows(2).all(|w| w[1] - w[0] > RANDOM_MIN_GAP)
            && TAU - t[n - 1] > RANDOM_MIN_GAP;
        if ok {
            return t;
        }
    }
}

/// Solves from `trials` random starts (trial `k` seeded with `seed + k`) and
/// returns the largest per-angle disagreement after canonical rotation.
pub fn multistart_uniqueness(m: &MultiplicityList, trials: usize, seed: u64) -> Result<f64> {
    if trials < 2 {
        return Err(Error::Config(format!("need at least 2 trials, got {trials}")));
    }
    let solutions: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let start = random_ordered_angles(m.len(), &mut rng);
            let cfg = SolverConfig {
                initializer: Initializer::Custom(start),
                ..Default::default()
            };
            let r = solve_equilibrium(m, &cfg)?;
            Ok(canonical_rotation(&r.arrangement).thetas().to_vec())
        })
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for a in 0..trials {
        for b in (a + 1)..trials {
            for (x, y) in solutions[a].iter().zip(&solutions[b]) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::locus::equally_spaced;

    #[test]
    fn bisection_finds_sqrt_two() {
        let root = BisectionProblem::new(|x| x * x - 2.0, 0.0, 2.0).solve().unwrap();
        assert!((root - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bisection_rejects_bad_bracket() {
        let err = BisectionProblem::new(|x| x * x + 1.0, -1.0, 1.0).solve().unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
    }

    #[test]
    fn bisection_is_reproducible() {
        let a = solve_a2_family(3).unwrap();
        let b = solve_a2_family(3).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn a2_unit_multiplicity_is_equal_spacing() {
        assert!((solve_a2_family(1).unwrap() - TAU / 3.0).abs() < 1e-13);
    }

    #[test]
    fn a2_angle_grows_with_multiplicity() {
        let phis: Vec<f64> = (1..=5).map(|m| solve_a2_family(m).unwrap()).collect();
        assert!(phis[1] > TAU / 3.0);
        assert!(phis.windows(2).all(|w| w[1] > w[0]), "{phis:?}");
        assert!(phis.iter().all(|&p| p > 0.0 && p < PI));
    }

    #[test]
    fn c2_equal_multiplicities_give_right_angle() {
        for m in [1, 3] {
            let (phi, psi) = solve_c2_family(m, m).unwrap();
            assert!((phi - FRAC_PI_2).abs() < 1e-13);
            assert_eq!(psi, PI);
        }
    }

    #[test]
    fn c2_heavier_first_line_pushes_light_lines_away() {
        let (phi, _) = solve_c2_family(3, 1).unwrap();
        assert!(phi > FRAC_PI_2);
        let (phi, _) = solve_c2_family(1, 3).unwrap();
        assert!(phi < FRAC_PI_2);
    }

    #[test]
    fn fd_gradient_vanishes_at_equal_spacing() {
        let e = ChargedEnsemble::new(equally_spaced(4), vec![2; 4]).unwrap();
        let g = fd_gradient(&e, FD_STEP).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-4), "{g:?}");
    }

    #[test]
    fn fd_gradient_sums_to_zero() {
        let e = ChargedEnsemble::new(vec![0.0, 0.8, 2.5, 4.1], vec![6, 2, 12, 2]).unwrap();
        let g = fd_gradient(&e, FD_STEP).unwrap();
        let sum: f64 = g.iter().sum();
        let scale: f64 = g.iter().map(|v| v.abs()).sum();
        assert!(sum.abs() < 1e-6 * scale.max(1.0));
    }

    #[test]
    fn fd_gradient_checks_preconditions() {
        let e = ChargedEnsemble::new(vec![0.0, 1e-6, 3.0], vec![2; 3]).unwrap();
        assert!(fd_gradient(&e, FD_STEP).is_err());
        let e = ChargedEnsemble::new(vec![0.0, 1.0, 3.0], vec![2; 3]).unwrap();
        assert!(fd_gradient(&e, 0.0).is_err());
    }

    #[test]
    fn random_angles_respect_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..10 {
            let t = random_ordered_angles(n, &mut rng);
            assert_eq!(t[0], 0.0);
            assert!(t.windows(2).all(|w| w[1] - w[0] > RANDOM_MIN_GAP));
            assert!(TAU - t[n - 1] > RANDOM_MIN_GAP);
        }
    }

    #[test]
    fn multistart_on_equal_charges() {
        let m = MultiplicityList::new(vec![1, 1, 1]).unwrap();
        assert!(multistart_uniqueness(&m, 5, 11).unwrap() < 1e-10);
        assert!(multistart_uniqueness(&m, 1, 11).is_err());
    }
}
