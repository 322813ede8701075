//! Locus equations, symmetry checks and verification reports.
//!
//! On a 2D arrangement with unit normals, the `k`-th locus equation at line
//! `i` evaluated on the spanning vector of that line reduces to
//! `Σ_{j≠i} q_j cos^{2k−1}(Δ/2) / sin^{2k+1}(Δ/2) = 0` with `Δ = θ_j − θ_i`.
//! All verdicts are taken on the relative residual: the sum divided by
//! `Σ_j q_j |cos|^{2k−2} / |sin|^{2k+1}`, the size its terms would have with
//! the cosine factor bounded by one. That scale dominates the term
//! magnitudes, so the ratio lies in `[0, 1]`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::arrangement::{wrap_angle, Arrangement, MultiplicityList};
use crate::error::{Error, Result};
use crate::kernel;

/// Relative tolerance used for the first locus equation by default.
pub const DEFAULT_TOL_FIRST: f64 = 1e-9;
/// Relative tolerance used for the higher locus equations by default.
pub const DEFAULT_TOL_LOCUS: f64 = 1e-8;
/// Angle tolerance (radians) for reflection matching by default.
pub const DEFAULT_TOL_REFLECTION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub first: f64,
    pub locus: f64,
    pub reflection: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            first: DEFAULT_TOL_FIRST,
            locus: DEFAULT_TOL_LOCUS,
            reflection: DEFAULT_TOL_REFLECTION,
        }
    }
}

/// Signed residual of one locus equation and its relative size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub residual: f64,
    pub relative: f64,
}

/// Residual of the `k`-th locus equation at line `i`, `1 ≤ k ≤ m_i`.
///
/// For `k = 1` the residual times `q_i` is exactly [`cm_force`](crate::cm_force).
pub fn locus_residual(a: &Arrangement, i: usize, k: u32) -> Result<Residual> {
    if i >= a.len() {
        return Err(Error::Index { index: i, n: a.len() });
    }
    let m = a.multiplicities().as_slice()[i];
    if k == 0 || k > m {
        return Err(Error::Order { line: i, k, multiplicity: m });
    }
    let sums = kernel::locus_sums(a.thetas(), &a.ensemble().charge_weights(), i, k)?;
    Ok(Residual {
        residual: sums.sum,
        relative: sums.relative(),
    })
}

/// True iff the relative first-locus residual is below `tol` at every line.
pub fn is_first_locus(a: &Arrangement, tol: f64) -> Result<bool> {
    for i in 0..a.len() {
        if locus_residual(a, i, 1)?.relative >= tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest `|F_i| / (q_i Σ_j q_j / |sin³|)` over the particles, with `F_i`
/// the force from [`cm_force`](crate::cm_force).
pub fn max_relative_force(a: &Arrangement) -> Result<f64> {
    let e = a.ensemble();
    let q = e.charge_weights();
    let mut worst: f64 = 0.0;
    for i in 0..a.len() {
        let force = crate::arrangement::cm_force(e, i)?;
        let scale = q[i] * kernel::locus_sums(e.thetas(), &q, i, 1)?.scale;
        let r = if scale > 0.0 { force.abs() / scale } else { 0.0 };
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Zero-force test on the particle ensemble: every relative force below `tol`.
pub fn is_force_balanced(a: &Arrangement, tol: f64) -> Result<bool> {
    Ok(max_relative_force(a)? < tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineReport {
    pub index: usize,
    pub multiplicity: u32,
    /// `residuals[k − 1]` is the `k`-th locus residual.
    pub residuals: Vec<f64>,
    pub relative: Vec<f64>,
    pub first_locus_pass: bool,
    pub all_locus_pass: bool,
    pub reflection_invariant: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusReport {
    pub lines: Vec<LineReport>,
    pub first_locus_pass: bool,
    pub all_locus_pass: bool,
    pub coarsely_coxeter: bool,
    pub tolerance: Tolerances,
}

impl LocusReport {
    pub fn max_relative(&self, k: u32) -> f64 {
        self.lines
            .iter()
            .filter_map(|l| l.relative.get(k as usize - 1))
            .fold(0.0, |a, &b| a.max(b))
    }

    pub fn max_relative_all(&self) -> f64 {
        self.lines
            .iter()
            .flat_map(|l| l.relative.iter())
            .fold(0.0, |a, &b| a.max(b))
    }
}

fn line_report(a: &Arrangement, i: usize, tol: &Tolerances) -> LineReport {
    let m = a.multiplicities().as_slice()[i];
    let reflection_invariant = is_reflection_invariant(a, i, tol.reflection);
    let mut residuals = Vec::with_capacity(m as usize);
    let mut rel = Vec::with_capacity(m as usize);
    for k in 1..=m {
        match locus_residual(a, i, k) {
            Ok(r) => {
                residuals.push(r.residual);
                rel.push(r.relative);
            }
            Err(e) => {
                return LineReport {
                    index: i,
                    multiplicity: m,
                    residuals,
                    relative: rel,
                    first_locus_pass: false,
                    all_locus_pass: false,
                    reflection_invariant,
                    error: Some(e.to_string()),
                }
            }
        }
    }
    let first_locus_pass = rel[0] < tol.first;
    let all_locus_pass = first_locus_pass && rel[1..].iter().all(|&r| r < tol.locus);
    LineReport {
        index: i,
        multiplicity: m,
        residuals,
        relative: rel,
        first_locus_pass,
        all_locus_pass,
        reflection_invariant,
        error: None,
    }
}

/// Full verification report. Collisions are recorded on the affected lines
/// and make them fail rather than aborting the report.
///
/// `first` applies to `k = 1`, `locus` to `k ≥ 2`, `reflection` to the
/// mirror checks.
pub fn locus_report(a: &Arrangement, tol: &Tolerances) -> LocusReport {
    let lines: Vec<LineReport> = (0..a.len()).map(|i| line_report(a, i, tol)).collect();
    let first_locus_pass = lines.iter().all(|l| l.first_locus_pass);
    let all_locus_pass = lines.iter().all(|l| l.all_locus_pass);
    let coarsely_coxeter = lines
        .iter()
        .all(|l| l.multiplicity <= 1 || l.reflection_invariant);
    LocusReport {
        lines,
        first_locus_pass,
        all_locus_pass,
        coarsely_coxeter,
        tolerance: *tol,
    }
}

/// Report with every locus order held to the same relative `tol`.
pub fn is_locus_configuration(a: &Arrangement, tol: f64) -> LocusReport {
    locus_report(
        a,
        &Tolerances {
            first: tol,
            locus: tol,
            reflection: DEFAULT_TOL_REFLECTION,
        },
    )
}

/// `m_{i+j} = m_{i−j}` for all `j`.
pub fn is_symmetric_about(m: &MultiplicityList, i: usize) -> bool {
    let i = i as isize;
    (1..=m.len() as isize / 2).all(|j| m.cyclic(i + j) == m.cyclic(i - j))
}

/// Every line with multiplicity above one is a symmetry axis of the list.
pub fn is_coarsely_symmetric(m: &MultiplicityList) -> bool {
    m.as_slice()
        .iter()
        .enumerate()
        .all(|(i, &mi)| mi <= 1 || is_symmetric_about(m, i))
}

/// Mirror image across line `i`: `θ'_j = 2θ_i − θ_j (mod 2π)`.
///
/// Reflection reverses the cyclic order, so the image is relabelled with
/// `image[i + j] = original[i − j]`; line `i` keeps its index and angle.
pub fn reflection_image(a: &Arrangement, i: usize) -> Result<Arrangement> {
    let n = a.len();
    if i >= n {
        return Err(Error::Index { index: i, n });
    }
    let theta_i = a.thetas()[i];
    let mut thetas = Vec::with_capacity(n);
    let mut mults = Vec::with_capacity(n);
    for idx in 0..n {
        let src = (2 * i + n - idx) % n;
        let t = if src == i {
            theta_i
        } else {
            wrap_angle(2.0 * theta_i - a.thetas()[src])
        };
        thetas.push(t);
        mults.push(a.multiplicities().as_slice()[src]);
    }
    Arrangement::new(MultiplicityList::new(mults)?, thetas)
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn sorted_pairs(a: &Arrangement) -> Vec<(f64, u32)> {
    let mut pairs: Vec<(f64, u32)> = a
        .thetas()
        .iter()
        .copied()
        .zip(a.multiplicities().as_slice().iter().copied())
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs
}

/// Smallest achievable worst-case angle mismatch between two arrangements
/// viewed as multisets of `(angle, multiplicity)`.
///
/// Both sides are sorted by angle and aligned under every cyclic shift, which
/// handles pairs that straddle `0 ≡ 2π`. Shifts that pair different
/// multiplicities are skipped; `f64::INFINITY` if none is admissible.
pub fn multiset_mismatch(a: &Arrangement, b: &Arrangement) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let pa = sorted_pairs(a);
    let pb = sorted_pairs(b);
    let n = pa.len();
    let mut best = f64::INFINITY;
    for shift in 0..n {
        let mut worst: f64 = 0.0;
        for t in 0..n {
            let (ta, ma) = pa[t];
            let (tb, mb) = pb[(t + shift) % n];
            if ma != mb {
                worst = f64::INFINITY;
                break;
            }
            worst = worst.max(circular_distance(ta, tb));
        }
        best = best.min(worst);
    }
    best
}

/// Worst angle mismatch between the arrangement and its mirror image in line `i`.
pub fn reflection_mismatch(a: &Arrangement, i: usize) -> Result<f64> {
    let image = reflection_image(a, i)?;
    Ok(multiset_mismatch(a, &image))
}

/// Reflection in line `i` maps the arrangement to itself within `tol` radians.
pub fn is_reflection_invariant(a: &Arrangement, i: usize, tol: f64) -> bool {
    reflection_mismatch(a, i).is_ok_and(|d| d <= tol)
}

/// Every line of multiplicity above one is a mirror of the arrangement.
pub fn is_coarsely_coxeter(a: &Arrangement, tol: f64) -> bool {
    a.multiplicities()
        .as_slice()
        .iter()
        .enumerate()
        .all(|(i, &m)| m <= 1 || is_reflection_invariant(a, i, tol))
}

/// Lines at `θ_i = 2π i / n`.
pub fn equally_spaced(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}
