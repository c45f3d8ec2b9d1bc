//! Input-independent snapping nets.
//!
//! The planar net at level `ℓ` is the lattice `h_ℓ·Z²` with `h_ℓ = (ε/2)·2^{−ℓ}`
//! in `(α, β)` coordinates; a curve net at level `ℓ` is the set of points at arc
//! length `k·ε·2^{−ℓ}` from the curve start. Both families are nested in `ℓ`,
//! and a net point is named by its level and integer index, so the same index
//! always denotes bit-for-bit the same value.

use serde::{Deserialize, Serialize};

use super::curve::Curve;
use crate::error::{Error, Result};

/// Which net a decomposition snapped to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NetSpec {
    Grid { epsilon: f64 },
    Curve { epsilon: f64, curve: Curve },
}

/// A net point: level and integer index. Curve nets use `k[1] = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetPoint {
    pub level: u32,
    pub k: [i64; 2],
}

/// Displacement and net point chosen for one eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Snap {
    pub point: NetPoint,
    pub value: [f64; 2],
    pub displacement: f64,
}

/// Indices beyond this lose integer exactness in `f64`.
const MAX_INDEX: f64 = (1u64 << 50) as f64;

impl NetSpec {
    pub fn epsilon(&self) -> f64 {
        match self {
            NetSpec::Grid { epsilon } | NetSpec::Curve { epsilon, .. } => *epsilon,
        }
    }

    /// Spacing of the level-`ℓ` net.
    pub fn spacing(&self, level: u32) -> f64 {
        let base = match self {
            NetSpec::Grid { epsilon } => epsilon / 2.0,
            NetSpec::Curve { epsilon, .. } => *epsilon,
        };
        base * 0.5f64.powi(level as i32)
    }

    /// Finest level whose indices stay exactly representable.
    pub fn max_level(&self, extent: f64) -> u32 {
        let mut level = 0;
        while level < 60 && extent / self.spacing(level + 1) < MAX_INDEX {
            level += 1;
        }
        level
    }

    /// Coordinates of a net point; `None` when the index is outside the net.
    pub fn value(&self, p: NetPoint) -> Option<[f64; 2]> {
        let h = self.spacing(p.level);
        match self {
            NetSpec::Grid { .. } => (p.k[1] >= 0).then(|| [p.k[0] as f64 * h, p.k[1] as f64 * h]),
            NetSpec::Curve { curve, .. } => {
                let last = (curve.length() / h).floor() as i64;
                (p.k[1] == 0 && (0..=last).contains(&p.k[0])).then(|| curve.point_at(p.k[0] as f64 * h))
            }
        }
    }

    /// Nearest level-`ℓ` point to `z = (α, β)` with `β ≥ 0` (up to rounding).
    pub fn snap(&self, z: [f64; 2], level: u32) -> Snap {
        let h = self.spacing(level);
        let k = match self {
            NetSpec::Grid { .. } => [(z[0] / h).round() as i64, ((z[1] / h).round() as i64).max(0)],
            NetSpec::Curve { curve, .. } => {
                let (s, _) = curve.project(z);
                let last = (curve.length() / h).floor() as i64;
                [((s / h).round() as i64).clamp(0, last), 0]
            }
        };
        let point = NetPoint { level, k };
        let value = self.value(point).expect("snapped index lies in the net");
        Snap {
            point,
            value,
            displacement: (value[0] - z[0]).hypot(value[1] - z[1]),
        }
    }

    pub(crate) fn check(&self) -> Result<()> {
        let e = self.epsilon();
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::Domain(format!("epsilon must be positive and finite, got {e}")));
        }
        if let NetSpec::Curve { curve, .. } = self {
            curve.validate()?;
        }
        Ok(())
    }
}
