//! Equilibria of the charged trigonometric Calogero–Moser system on the
//! circle and the real 2D line arrangements they encode.
//!
//! A cyclic list of multiplicities `m` determines charges `q = m(m + 1)`.
//! The unique cyclically ordered minimiser of the pair potential
//! `Σ q_i q_j / sin²((θ_j − θ_i)/2)` gives an arrangement of lines with
//! normals `(cos(θ/2), sin(θ/2))` whose first locus equations all hold;
//! [`locus`] checks the remaining locus equations and the mirror symmetries
//! that force them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arrangement;
pub mod checks;
pub mod cli;
pub mod error;
mod kernel;
pub mod locus;
pub mod oracles;
pub mod plot;
pub mod solver;

pub use arrangement::{
    charges_from_multiplicities, cm_force, cm_potential, normal_vector, schrodinger_potential,
    spanning_vector, wrap_angle, Arrangement, ArrangementJson, ChargedEnsemble, MultiplicityList,
    COLLISION_THRESHOLD,
};
pub use error::{Error, Result};
pub use locus::{
    is_coarsely_coxeter, is_coarsely_symmetric, is_first_locus, is_locus_configuration,
    is_reflection_invariant, locus_report, locus_residual, reflection_image, LineReport,
    LocusReport, Residual, Tolerances,
};
pub use solver::{
    canonical_rotation, reduced_gradient, reduced_hessian, solve_equilibrium, Gauge, Initializer,
    SolveResult, SolveResultJson, SolverConfig,
};
