//! Numerical tolerances shared across the crate.
//!
//! Every comparison in the library goes through one of these thresholds so a
//! caller (the CLI `--tol-scale` flag in particular) can loosen or tighten all
//! of them at once.

use serde::{Deserialize, Serialize};

/// Scalar comparisons, scaled by `max(1, magnitudes)`.
pub const SCALAR: f64 = 1e-12;
/// Structural matrix predicates (adjoint relations, orthonormality, block pattern).
pub const STRUCTURE: f64 = 1e-10;
/// Slice membership and leakage out of the slice plane.
pub const SLICE: f64 = 1e-9;
/// Commutation with the complex structure J.
pub const COMMUTE: f64 = 1e-8;
/// Clustering of eigenvalue representatives.
pub const CLUSTER: f64 = 1e-8;
/// Scale-aware singularity decision for the Δ_q pencil.
pub const SINGULAR: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub scalar: f64,
    pub structure: f64,
    pub slice: f64,
    pub commute: f64,
    pub cluster: f64,
    pub singular: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            scalar: SCALAR,
            structure: STRUCTURE,
            slice: SLICE,
            commute: COMMUTE,
            cluster: CLUSTER,
            singular: SINGULAR,
        }
    }
}

impl Tolerances {
    /// Multiplies every threshold by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            scalar: self.scalar * factor,
            structure: self.structure * factor,
            slice: self.slice * factor,
            commute: self.commute * factor,
            cluster: self.cluster * factor,
            singular: self.singular * factor,
        }
    }
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
