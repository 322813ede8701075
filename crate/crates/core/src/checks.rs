//! Oracle suites behind `locus check`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arrangement::{cm_force, ChargedEnsemble, MultiplicityList};
use crate::error::Result;
use crate::kernel;
use crate::oracles::{fd_gradient, multistart_uniqueness, solve_a2_family, solve_c2_family, FD_STEP};
use crate::solver::{solve_equilibrium, SolverConfig};

pub const GRADIENT_CASES: usize = 100;
pub const GRADIENT_TOL: f64 = 1e-6;
pub const ROTATION_TOL: f64 = 1e-9;
pub const FAMILY_TOL: f64 = 1e-10;
pub const UNIQUENESS_TOL: f64 = 1e-8;
pub const UNIQUENESS_TRIALS: usize = 20;
/// Minimum cyclic gap of the random ensembles used for derivative checks.
pub const GRADIENT_MIN_GAP: f64 = 0.05;

/// Multiplicity lists exercised by the uniqueness suite.
pub const UNIQUENESS_LISTS: &[&[u32]] = &[&[1, 1, 1], &[2, 1, 1, 1], &[3, 1, 2, 1], &[2, 2, 1, 1, 1, 1]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Gradients,
    Families,
    Uniqueness,
    All,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub suite: &'static str,
    pub case: String,
    pub metric: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    fn new(suite: &'static str, case: String, metric: f64, tolerance: f64) -> Self {
        Self { suite, case, metric, tolerance, pass: metric < tolerance }
    }

    fn failed(suite: &'static str, case: String, tolerance: f64) -> Self {
        Self { suite, case, metric: f64::INFINITY, tolerance, pass: false }
    }
}

/// Random ensemble with `n ∈ [2, 8]`, multiplicities in `[1, 4]` and cyclic
/// gaps of at least [`GRADIENT_MIN_GAP`].
pub fn random_test_ensemble<R: Rng>(rng: &mut R) -> ChargedEnsemble {
    let n = rng.random_range(2..=8);
    let charges: Vec<u64> = (0..n)
        .map(|_| {
            let m: u64 = rng.random_range(1..=4);
            m * (m + 1)
        })
        .collect();
    loop {
        let mut t: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
        t.sort_by(f64::total_cmp);
        let ok = t.windows(2).all(|w| w[1] - w[0] > GRADIENT_MIN_GAP)
            && TAU - t[n - 1] + t[0] > GRADIENT_MIN_GAP;
        if ok {
            return ChargedEnsemble::new(t, charges).expect("sorted distinct angles");
        }
    }
}

/// Per-coordinate magnitude scale `2 q_i Σ_j q_j / |sin³|` of the gradient.
pub fn gradient_scales(e: &ChargedEnsemble) -> Result<Vec<f64>> {
    let q: Vec<f64> = e.charges().iter().map(|&c| c as f64).collect();
    (0..e.len())
        .map(|i| {
            Ok(2.0 * q[i] * kernel::locus_sums(e.thetas(), &q, i, 1)?.scale)
        })
        .collect()
}

/// Worst `|fd − 2F_i|` over coordinates, divided by the largest gradient scale.
pub fn gradient_error(e: &ChargedEnsemble) -> Result<f64> {
    let fd = fd_gradient(e, FD_STEP)?;
    let scale = gradient_scales(e)?.into_iter().fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (i, fd_i) in fd.iter().enumerate() {
        worst = worst.max((fd_i - 2.0 * cm_force(e, i)?).abs());
    }
    Ok(worst / scale)
}

/// `|Σ_i 2F_i|` relative to the summed gradient scales.
pub fn rotation_defect(e: &ChargedEnsemble) -> Result<f64> {
    let sum: f64 = (0..e.len())
        .map(|i| cm_force(e, i).map(|f| 2.0 * f))
        .sum::<Result<f64>>()?;
    let scale: f64 = gradient_scales(e)?.iter().sum();
    Ok(sum.abs() / scale)
}

fn gradients(seed: u64) -> Vec<CheckRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fd_worst: f64 = 0.0;
    let mut rot_worst: f64 = 0.0;
    for _ in 0..GRADIENT_CASES {
        let e = random_test_ensemble(&mut rng);
        match (gradient_error(&e), rotation_defect(&e)) {
            (Ok(a), Ok(b)) => {
                fd_worst = fd_worst.max(a);
                rot_worst = rot_worst.max(b);
            }
            _ => return vec![CheckRow::failed("gradients", "random ensembles".into(), GRADIENT_TOL)],
        }
    }
    vec![
        CheckRow::new(
            "gradients",
            format!("finite differences, {GRADIENT_CASES} ensembles"),
            fd_worst,
            GRADIENT_TOL,
        ),
        CheckRow::new(
            "gradients",
            format!("gradient sum, {GRADIENT_CASES} ensembles"),
            rot_worst,
            ROTATION_TOL,
        ),
    ]
}

fn deviation(solved: &[f64], expected: &[f64]) -> f64 {
    solved
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Per-angle deviation of the solver from the `(m, 1, 1)` bisection oracle.
pub fn a2_deviation(m: u32) -> Result<f64> {
    let phi = solve_a2_family(m)?;
    let list = MultiplicityList::new(vec![m, 1, 1])?;
    let r = solve_equilibrium(&list, &SolverConfig::default())?;
    Ok(deviation(r.arrangement.thetas(), &[0.0, phi, TAU - phi]))
}

/// Per-angle deviation of the solver from the `(m, 1, l, 1)` bisection oracle.
pub fn c2_deviation(m: u32, l: u32) -> Result<f64> {
    let (phi, opposite) = solve_c2_family(m, l)?;
    let list = MultiplicityList::new(vec![m, 1, l, 1])?;
    let r = solve_equilibrium(&list, &SolverConfig::default())?;
    Ok(deviation(r.arrangement.thetas(), &[0.0, phi, opposite, TAU - phi]))
}

fn families() -> Vec<CheckRow> {
    let mut rows = Vec::new();
    for m in 1..=5 {
        let case = format!("A2 ({m},1,1)");
        rows.push(match a2_deviation(m) {
            Ok(d) => CheckRow::new("families", case, d, FAMILY_TOL),
            Err(_) => CheckRow::failed("families", case, FAMILY_TOL),
        });
    }
    for m in 1..=4 {
        for l in 1..=4 {
            let case = format!("C2 ({m},1,{l},1)");
            rows.push(match c2_deviation(m, l) {
                Ok(d) => CheckRow::new("families", case, d, FAMILY_TOL),
                Err(_) => CheckRow::failed("families", case, FAMILY_TOL),
            });
        }
    }
    rows
}

fn uniqueness(seed: u64) -> Vec<CheckRow> {
    UNIQUENESS_LISTS
        .iter()
        .map(|m| {
            let case = format!("{m:?} x{UNIQUENESS_TRIALS}");
            let list = MultiplicityList::new(m.to_vec()).expect("fixed list is valid");
            match multistart_uniqueness(&list, UNIQUENESS_TRIALS, seed) {
                Ok(d) => CheckRow::new("uniqueness", case, d, UNIQUENESS_TOL),
                Err(_) => CheckRow::failed("uniqueness", case, UNIQUENESS_TOL),
            }
        })
        .collect()
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckRow> {
    match suite {
        Suite::Gradients => gradients(seed),
        Suite::Families => families(),
        Suite::Uniqueness => uniqueness(seed),
        Suite::All => {
            let mut rows = gradients(seed);
            rows.extend(families());
            rows.extend(uniqueness(seed));
            rows
        }
    }
}

