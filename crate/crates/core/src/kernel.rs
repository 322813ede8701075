//! Slice-level numerical kernels shared by the public operations.
//!
//! Angles here are raw coordinates, not necessarily reduced to `[0, 2π)`:
//! every quantity depends on differences only through `sin` and `cos` of
//! the half-difference, and odd powers of both appear together, so shifting
//! any angle by `2π` leaves every term unchanged.

use crate::error::{Error, Result};

/// `|sin((θ_j − θ_i)/2)|` below this is treated as a collision.
pub const COLLISION_THRESHOLD: f64 = 1e-12;

/// `(cos, sin)` of the half-difference `(θ_j − θ_i)/2`.
#[inline]
pub(crate) fn half_angle(thetas: &[f64], i: usize, j: usize) -> Result<(f64, f64)> {
    let (s, c) = (0.5 * (thetas[j] - thetas[i])).sin_cos();
    if s.abs() < COLLISION_THRESHOLD {
        return Err(Error::Collision { i, j, sin_half: s });
    }
    Ok((c, s))
}

/// Sum of the `k`-th locus equation at line `i` together with its scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct TermSums {
    /// `Σ_{j≠i} q_j cos^{2k−1}/sin^{2k+1}` of the half-differences, in index order.
    pub sum: f64,
    /// `Σ_{j≠i} q_j |cos|^{2k−2}/|sin|^{2k+1}`.
    ///
    /// This bounds `Σ |term|` and, unlike it, stays meaningful when the
    /// cosines themselves vanish (perpendicular lines), where the terms are
    /// pure rounding noise of size `ε q_j / |sin|^{2k+1}`.
    pub scale: f64,
}

impl TermSums {
    /// `|sum| / scale`, zero when the scale vanishes.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            (self.sum.abs() / self.scale).min(1.0)
        } else {
            0.0
        }
    }
}

pub(crate) fn locus_sums(thetas: &[f64], charges: &[f64], i: usize, k: u32) -> Result<TermSums> {
    let odd_lo = 2 * k as i32 - 1;
    let odd_hi = 2 * k as i32 + 1;
    let mut sum = 0.0;
    let mut scale = 0.0;
    for (j, &q) in charges.iter().enumerate().take(thetas.len()) {
        if j == i {
            continue;
        }
        let (c, s) = half_angle(thetas, i, j)?;
        sum += q * c.powi(odd_lo) / s.powi(odd_hi);
        scale += q * c.abs().powi(odd_lo - 1) / s.abs().powi(odd_hi);
    }
    Ok(TermSums { sum, scale })
}

/// `q_i Σ_j q_j cos/sin³`, the force expression on particle `i`.
pub(crate) fn force(thetas: &[f64], charges: &[f64], i: usize) -> Result<f64> {
    Ok(charges[i] * locus_sums(thetas, charges, i, 1)?.sum)
}

/// `Σ_{i≠j} q_i q_j / sin²((θ_j − θ_i)/2)` over ordered pairs.
pub(crate) fn potential(thetas: &[f64], charges: &[f64]) -> Result<f64> {
    let n = thetas.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (_, s) = half_angle(thetas, i, j)?;
            total += charges[i] * charges[j] / (s * s);
        }
    }
    Ok(total)
}

/// Full gradient of the potential: `2 · force`.
pub(crate) fn gradient(thetas: &[f64], charges: &[f64]) -> Result<Vec<f64>> {
    (0..thetas.len())
        .map(|i| force(thetas, charges, i).map(|f| 2.0 * f))
        .collect()
}

/// Full `n × n` Hessian of the potential, row-major.
///
/// With `U(t) = sin⁻²(t/2)`, `U''(t) = (1 + 2cos²(t/2)) / (2 sin⁴(t/2))`; each
/// unordered pair appears twice in the potential, so the pair block is
/// `2 q_i q_j U''` on the diagonal and its negative off the diagonal.
pub(crate) fn hessian(thetas: &[f64], charges: &[f64]) -> Result<Vec<f64>> {
    let n = thetas.len();
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (c, s) = half_angle(thetas, i, j)?;
            let s2 = s * s;
            let w = 2.0 * charges[i] * charges[j] * (1.0 + 2.0 * c * c) / (2.0 * s2 * s2);
            h[i * n + j] = -w;
            h[j * n + i] = -w;
            h[i * n + i] += w;
            h[j * n + j] += w;
        }
    }
    Ok(h)
}

/// `μ(θ + δ) − μ(θ)` evaluated pairwise without forming either potential.
///
/// Uses `sin⁻²B − sin⁻²A = sin(A − B) sin(A + B) / (sin²A sin²B)` with the
/// half-differences `A`, `B` before and after the step, so the result keeps
/// full relative accuracy even when the change is far below the rounding
/// level of `μ` itself.
pub(crate) fn potential_change(
    thetas: &[f64],
    step: &[f64],
    charges: &[f64],
) -> Result<f64> {
    let n = thetas.len();
    let moved: Vec<f64> = thetas.iter().zip(step).map(|(t, d)| t + d).collect();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let (_, sa) = half_angle(thetas, i, j)?;
            let (_, sb) = half_angle(&moved, i, j)?;
            let a = 0.5 * (thetas[j] - thetas[i]);
            let a_minus_b = 0.5 * (step[i] - step[j]);
            let a_plus_b = 2.0 * a - a_minus_b;
            let du = a_minus_b.sin() * a_plus_b.sin() / (sa * sa * sb * sb);
            total += 2.0 * charges[i] * charges[j] * du;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_change_matches_direct_difference() {
        let thetas = [0.0, 1.1, 2.9, 4.4];
        let charges = [6.0, 2.0, 12.0, 2.0];
        let step = [0.0, 0.03, -0.02, 0.05];
        let moved: Vec<f64> = thetas.iter().zip(&step).map(|(t, d)| t + d).collect();
        let direct = potential(&moved, &charges).unwrap() - potential(&thetas, &charges).unwrap();
        let pairwise = potential_change(&thetas, &step, &charges).unwrap();
        assert!((direct - pairwise).abs() < 1e-10 * direct.abs());
    }

    #[test]
    fn potential_change_resolves_tiny_steps() {
        let thetas = [0.0, 1.1, 2.9, 4.4];
        let charges = [6.0, 2.0, 12.0, 2.0];
        let g = gradient(&thetas, &charges).unwrap();
        let step: Vec<f64> = [0.0, 1e-9, -2e-9, 5e-10].to_vec();
        let predicted: f64 = g.iter().zip(&step).map(|(a, b)| a * b).sum();
        let pairwise = potential_change(&thetas, &step, &charges).unwrap();
        assert!((pairwise - predicted).abs() < 1e-6 * predicted.abs());
    }

    #[test]
    fn collision_is_reported() {
        let err = potential(&[0.0, 1e-13, 3.0], &[2.0, 2.0, 2.0]).unwrap_err();
        assert!(matches!(err, Error::Collision { i: 0, j: 1, .. }));
    }

    #[test]
    fn hessian_rows_sum_to_zero() {
        let thetas = [0.0, 0.7, 2.0, 3.3, 5.1];
        let charges = [2.0, 6.0, 2.0, 12.0, 2.0];
        let h = hessian(&thetas, &charges).unwrap();
        for i in 0..5 {
            let row: f64 = h[i * 5..(i + 1) * 5].iter().sum();
            let scale: f64 = h[i * 5..(i + 1) * 5].iter().map(|v| v.abs()).sum();
            assert!(row.abs() < 1e-13 * scale);
        }
    }
}
