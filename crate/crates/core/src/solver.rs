//! Gauge-fixed damped Newton minimisation of the charged potential.
//!
//! The potential is convex on the chamber of cyclically ordered
//! configurations and blows up at its boundary. Pinning `θ_1 = 0` removes
//! the rotation null direction, so the reduced Hessian is positive definite
//! and the minimiser is the unique equilibrium.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::arrangement::{cm_potential, wrap_angle, Arrangement, ChargedEnsemble, MultiplicityList};
use crate::error::{Error, Result};
use crate::kernel;
use crate::locus::equally_spaced;

/// Trial points with a cyclic gap at or below this are rejected.
pub const MIN_GAP: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum Initializer {
    EquallySpaced,
    /// Cyclically ordered starting angles; rotated so the first is zero.
    Custom(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearch {
    pub shrink: f64,
    pub sufficient_decrease: f64,
    pub max_halvings: u32,
}

impl Default for LineSearch {
    fn default() -> Self {
        Self {
            shrink: 0.5,
            sufficient_decrease: 1e-4,
            max_halvings: 80,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Bound on `‖∇μ_reduced‖_∞ / max_{i≠j} q_i q_j`.
    pub grad_tol: f64,
    pub max_iters: usize,
    pub initializer: Initializer,
    pub line_search: LineSearch,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grad_tol: 1e-12,
            max_iters: 200,
            initializer: Initializer::EquallySpaced,
            line_search: LineSearch::default(),
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.grad_tol > 0.0) {
            return Err(Error::Config(format!("grad_tol must be positive, got {}", self.grad_tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        let ls = &self.line_search;
        if !(ls.shrink > 0.0 && ls.shrink < 1.0) {
            return Err(Error::Config(format!("shrink factor {} not in (0, 1)", ls.shrink)));
        }
        if !(ls.sufficient_decrease > 0.0 && ls.sufficient_decrease < 1.0) {
            return Err(Error::Config(format!(
                "sufficient-decrease constant {} not in (0, 1)",
                ls.sufficient_decrease
            )));
        }
        Ok(())
    }
}

/// Rotation normalisation applied to the result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gauge {
    /// Index of the line pinned at angle zero.
    pub pinned_line: usize,
    /// Angle subtracted from the initial configuration.
    pub rotation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub scaled_gradient: f64,
    pub step_length: f64,
    /// Exact change of the potential over the accepted step.
    pub potential_change: f64,
    pub newton_step: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub arrangement: Arrangement,
    /// Reduced-gradient infinity norm divided by the largest charge product.
    pub gradient_inf_norm: f64,
    pub iterations: usize,
    pub potential_value: f64,
    pub gauge: Gauge,
    pub trace: Vec<IterationRecord>,
}

/// Wire form of a solve: the arrangement plus convergence data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveResultJson {
    pub multiplicities: Vec<u32>,
    pub thetas: Vec<f64>,
    pub gradient_inf_norm: f64,
    pub iterations: usize,
    pub potential: f64,
}

impl From<&SolveResult> for SolveResultJson {
    fn from(r: &SolveResult) -> Self {
        Self {
            multiplicities: r.arrangement.multiplicities().as_slice().to_vec(),
            thetas: r.arrangement.thetas().to_vec(),
            gradient_inf_norm: r.gradient_inf_norm,
            iterations: r.iterations,
            potential: r.potential_value,
        }
    }
}

/// `(∂μ/∂θ_i)_{i=2..n}`, the gradient with `θ_1` frozen.
pub fn reduced_gradient(e: &ChargedEnsemble) -> Result<Vec<f64>> {
    let g = kernel::gradient(e.thetas(), &e.charge_weights())?;
    Ok(g[1..].to_vec())
}

/// Hessian of `μ` in `(θ_2, …, θ_n)`.
pub fn reduced_hessian(e: &ChargedEnsemble) -> Result<DMatrix<f64>> {
    let n = e.len();
    let full = kernel::hessian(e.thetas(), &e.charge_weights())?;
    Ok(DMatrix::from_fn(n - 1, n - 1, |r, c| full[(r + 1) * n + (c + 1)]))
}

/// Rotates every angle by `−θ_1`, so line 0 sits at angle zero.
pub fn canonical_rotation(a: &Arrangement) -> Arrangement {
    let thetas = rotate_to_zero(a.thetas());
    Arrangement::new(a.multiplicities().clone(), thetas)
        .expect("rotation preserves cyclic order")
}

fn rotate_to_zero(thetas: &[f64]) -> Vec<f64> {
    let first = thetas[0];
    thetas
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            if j == 0 {
                0.0
            } else if t >= first {
                t - first
            } else {
                wrap_angle(t - first + TAU)
            }
        })
        .collect()
}

/// `max_{i≠j} q_i q_j`: product of the two largest charges.
fn charge_scale(charges: &[f64]) -> f64 {
    let mut top = [0.0f64; 2];
    for &q in charges {
        if q > top[0] {
            top = [q, top[0]];
        } else if q > top[1] {
            top[1] = q;
        }
    }
    top[0] * top[1]
}

/// Strictly increasing from zero with every cyclic gap above [`MIN_GAP`].
fn in_chamber(thetas: &[f64]) -> bool {
    let n = thetas.len();
    thetas.iter().all(|t| t.is_finite())
        && (1..n).all(|i| thetas[i] - thetas[i - 1] > MIN_GAP)
        && TAU - thetas[n - 1] > MIN_GAP
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, &b| a.max(b.abs()))
}

/// Newton direction, or `None` if the Hessian is unusable.
fn newton_direction(thetas: &[f64], charges: &[f64], grad: &[f64]) -> Option<Vec<f64>> {
    let n = thetas.len();
    let full = kernel::hessian(thetas, charges).ok()?;
    if full.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let h = DMatrix::from_fn(n - 1, n - 1, |r, c| full[(r + 1) * n + (c + 1)]);
    let chol = h.cholesky()?;
    let g = DVector::from_column_slice(grad);
    let p = -chol.solve(&g);
    p.iter().all(|v| v.is_finite()).then(|| p.iter().copied().collect())
}

/// Unique cyclically ordered equilibrium for the given multiplicities,
/// with line 0 at angle zero.
pub fn solve_equilibrium(m: &MultiplicityList, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let n = m.len();
    let charges_int = m.charges();
    let charges: Vec<f64> = charges_int.iter().map(|&q| q as f64).collect();
    let scale = charge_scale(&charges);

    let (mut thetas, gauge) = match &cfg.initializer {
        Initializer::EquallySpaced => (
            equally_spaced(n),
            Gauge { pinned_line: 0, rotation: 0.0 },
        ),
        Initializer::Custom(start) => {
            ChargedEnsemble::new(start.clone(), charges_int.clone())?;
            (
                rotate_to_zero(start),
                Gauge { pinned_line: 0, rotation: start[0] },
            )
        }
    };
    if !in_chamber(&thetas) {
        return Err(Error::InvalidEnsemble(format!(
            "initial angles have a gap below {MIN_GAP:e}"
        )));
    }

    let ls = cfg.line_search;
    let mut trace = Vec::new();
    let mut iteration = 0;
    loop {
        let grad_full = kernel::gradient(&thetas, &charges)?;
        let grad = &grad_full[1..];
        let scaled = inf_norm(grad) / scale;
        if scaled <= cfg.grad_tol {
            let ensemble = ChargedEnsemble::new(thetas, charges_int)?;
            let potential_value = cm_potential(&ensemble)?;
            let arrangement = Arrangement::from_parts(ensemble, m.clone())?;
            return Ok(SolveResult {
                arrangement,
                gradient_inf_norm: scaled,
                iterations: iteration,
                potential_value,
                gauge,
                trace,
            });
        }
        let stalled = |thetas: &[f64]| Error::NoConvergence {
            iterations: iteration,
            scaled_gradient: scaled,
            potential: kernel::potential(thetas, &charges).unwrap_or(f64::NAN),
        };
        if iteration >= cfg.max_iters {
            return Err(stalled(&thetas));
        }

        let (direction, newton_step) = match newton_direction(&thetas, &charges, grad) {
            Some(p) => (p, true),
            None => {
                // steepest descent, sized to a fraction of the smallest gap
                let min_gap = (1..n)
                    .map(|i| thetas[i] - thetas[i - 1])
                    .fold(TAU - thetas[n - 1], f64::min);
                let g_max = inf_norm(grad);
                (grad.iter().map(|g| -0.5 * min_gap * g / g_max).collect(), false)
            }
        };
        let slope: f64 = grad.iter().zip(&direction).map(|(g, p)| g * p).sum();

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..ls.max_halvings {
            let trial: Vec<f64> = std::iter::once(0.0)
                .chain(thetas[1..].iter().zip(&direction).map(|(t, p)| t + alpha * p))
                .collect();
            if in_chamber(&trial) {
                let step: Vec<f64> = trial.iter().zip(&thetas).map(|(a, b)| a - b).collect();
                let change = kernel::potential_change(&thetas, &step, &charges)?;
                if change <= ls.sufficient_decrease * alpha * slope {
                    accepted = Some((trial, change));
                    break;
                }
            }
            alpha *= ls.shrink;
        }
        let Some((trial, change)) = accepted else {
            return Err(stalled(&thetas));
        };
        thetas = trial;
        iteration += 1;
        trace.push(IterationRecord {
            iteration,
            scaled_gradient: scaled,
            step_length: alpha,
            potential_change: change,
            newton_step,
        });
    }
}
