//! Line arrangements with multiplicity and their charged particle ensembles.
//!
//! A line through the origin of the real plane with unit normal
//! `α = (cos(θ/2), sin(θ/2))` is encoded by the particle angle `θ ∈ [0, 2π)`.
//! The particle carries charge `q = m(m + 1)` where `m` is the multiplicity.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel;

pub use crate::kernel::COLLISION_THRESHOLD;

/// Reduces an angle to its representative in `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Cyclic list of positive multiplicities, at least two entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct MultiplicityList(Vec<u32>);

impl MultiplicityList {
    pub fn new(m: Vec<u32>) -> Result<Self> {
        if m.len() < 2 {
            return Err(Error::InvalidMultiplicities(format!(
                "need at least 2 lines, got {}",
                m.len()
            )));
        }
        if let Some(pos) = m.iter().position(|&v| v == 0) {
            return Err(Error::InvalidMultiplicities(format!(
                "multiplicity at index {pos} is zero"
            )));
        }
        Ok(Self(m))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Multiplicity at a cyclic index, `i` taken mod `n`.
    pub fn cyclic(&self, i: isize) -> u32 {
        let n = self.0.len() as isize;
        self.0[i.rem_euclid(n) as usize]
    }

    pub fn charges(&self) -> Vec<u64> {
        charges_from_multiplicities(self)
    }
}

impl TryFrom<Vec<u32>> for MultiplicityList {
    type Error = Error;

    fn try_from(m: Vec<u32>) -> Result<Self> {
        Self::new(m)
    }
}

impl From<MultiplicityList> for Vec<u32> {
    fn from(m: MultiplicityList) -> Self {
        m.0
    }
}

/// `q_i = m_i (m_i + 1)`.
pub fn charges_from_multiplicities(m: &MultiplicityList) -> Vec<u64> {
    m.0.iter().map(|&v| u64::from(v) * (u64::from(v) + 1)).collect()
}

/// Unit normal `(cos(θ/2), sin(θ/2))` of the line encoded by `θ`.
pub fn normal_vector(theta: f64) -> [f64; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    [c, s]
}

/// Direction `(−sin(θ/2), cos(θ/2))` spanning the line encoded by `θ`.
pub fn spanning_vector(theta: f64) -> [f64; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    [-s, c]
}

/// Returns true if `thetas` read in index order wind once around the circle.
fn is_cyclically_ordered(thetas: &[f64]) -> bool {
    let n = thetas.len();
    let mut descents = 0;
    for i in 0..n {
        let (a, b) = (thetas[i], thetas[(i + 1) % n]);
        if a == b {
            return false;
        }
        if b < a {
            descents += 1;
        }
    }
    descents == 1
}

/// Particles on the circle with positive charges, cyclically ordered.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargedEnsemble {
    thetas: Vec<f64>,
    charges: Vec<u64>,
}

impl ChargedEnsemble {
    pub fn new(thetas: Vec<f64>, charges: Vec<u64>) -> Result<Self> {
        let n = thetas.len();
        if n < 2 {
            return Err(Error::InvalidEnsemble(format!("need at least 2 particles, got {n}")));
        }
        if charges.len() != n {
            return Err(Error::InvalidEnsemble(format!(
                "{n} angles but {} charges",
                charges.len()
            )));
        }
        if charges.contains(&0) {
            return Err(Error::InvalidEnsemble("charges must be positive".into()));
        }
        if let Some(bad) = thetas.iter().find(|t| !(0.0..TAU).contains(*t)) {
            return Err(Error::InvalidEnsemble(format!("angle {bad} is outside [0, 2π)")));
        }
        if !is_cyclically_ordered(&thetas) {
            return Err(Error::InvalidEnsemble(
                "angles are not distinct and cyclically ordered".into(),
            ));
        }
        Ok(Self { thetas, charges })
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn charges(&self) -> &[u64] {
        &self.charges
    }

    pub(crate) fn charge_weights(&self) -> Vec<f64> {
        self.charges.iter().map(|&q| q as f64).collect()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::Index { index: i, n: self.len() });
        }
        Ok(())
    }
}

/// Charged trigonometric Calogero–Moser potential
/// `μ = Σ_{i≠j} q_i q_j / sin²((θ_j − θ_i)/2)`, each unordered pair counted twice.
pub fn cm_potential(e: &ChargedEnsemble) -> Result<f64> {
    kernel::potential(&e.thetas, &e.charge_weights())
}

/// `q_i Σ_{j≠i} q_j cos((θ_j − θ_i)/2) / sin³((θ_j − θ_i)/2)`.
///
/// This is half of `∂μ/∂θ_i`, because `μ` counts each pair twice. Zero sets
/// coincide, so equilibrium means every force vanishes.
pub fn cm_force(e: &ChargedEnsemble, i: usize) -> Result<f64> {
    e.check_index(i)?;
    kernel::force(&e.thetas, &e.charge_weights(), i)
}

/// A real central line arrangement with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArrangementJson", into = "ArrangementJson")]
pub struct Arrangement {
    ensemble: ChargedEnsemble,
    mults: MultiplicityList,
}

impl Arrangement {
    pub fn new(mults: MultiplicityList, thetas: Vec<f64>) -> Result<Self> {
        if thetas.len() != mults.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} multiplicities but {} angles",
                mults.len(),
                thetas.len()
            )));
        }
        let ensemble = ChargedEnsemble::new(thetas, mults.charges())?;
        Ok(Self { ensemble, mults })
    }

    pub fn from_parts(ensemble: ChargedEnsemble, mults: MultiplicityList) -> Result<Self> {
        if ensemble.charges() != mults.charges().as_slice() {
            return Err(Error::InvalidEnsemble(
                "charges do not equal m(m+1) for the given multiplicities".into(),
            ));
        }
        Ok(Self { ensemble, mults })
    }

    pub fn ensemble(&self) -> &ChargedEnsemble {
        &self.ensemble
    }

    pub fn multiplicities(&self) -> &MultiplicityList {
        &self.mults
    }

    pub fn thetas(&self) -> &[f64] {
        self.ensemble.thetas()
    }

    pub fn len(&self) -> usize {
        self.mults.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn normal(&self, i: usize) -> [f64; 2] {
        normal_vector(self.thetas()[i])
    }

    pub fn spanning(&self, i: usize) -> [f64; 2] {
        spanning_vector(self.thetas()[i])
    }
}

/// Interchange form: `{"multiplicities": [...], "thetas": [...]}`.
///
/// Unknown keys are ignored, so solver output can be read back directly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrangementJson {
    pub multiplicities: Vec<u32>,
    pub thetas: Vec<f64>,
}

impl TryFrom<ArrangementJson> for Arrangement {
    type Error = Error;

    fn try_from(raw: ArrangementJson) -> Result<Self> {
        let mults = MultiplicityList::new(raw.multiplicities)?;
        Arrangement::new(mults, raw.thetas)
    }
}

impl From<Arrangement> for ArrangementJson {
    fn from(a: Arrangement) -> Self {
        Self {
            multiplicities: a.mults.into(),
            thetas: a.ensemble.thetas,
        }
    }
}

impl Arrangement {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("arrangement serializes")
    }
}

/// `u(x) = Σ_i m_i(m_i + 1) ⟨α_i, α_i⟩ / ⟨α_i, x⟩²` with unit normals.
pub fn schrodinger_potential(a: &Arrangement, x: [f64; 2]) -> Result<f64> {
    let mut u = 0.0;
    for (line, (&theta, &q)) in a.thetas().iter().zip(a.ensemble.charges()).enumerate() {
        let alpha = normal_vector(theta);
        let inner = alpha[0] * x[0] + alpha[1] * x[1];
        if inner.abs() < COLLISION_THRESHOLD {
            return Err(Error::Singular { line, inner });
        }
        u += q as f64 / (inner * inner);
    }
    Ok(u)
}
