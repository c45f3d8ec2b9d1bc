//! Finite sections of a normal operator on `ℓ²(H)`.
//!
//! The operator is a diagonal `d_r` (indexed from `r = 1`) plus an optional
//! finite stencil added to the top-left corner. Each `n × n` section is
//! decomposed independently. In operator-norm mode the net does not depend on
//! the input, so the snapped diagonal of a smaller section reappears in every
//! larger one.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::curve::Curve;
use super::decompose::{decompose_hs, decompose_op_norm, Decomposition, Mode};
use super::net::NetPoint;
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::qop::{classify, QMatrix};
use crate::quat::{Quaternion, UnitImaginary};

/// Formula for the diagonal entries `d_r`, `r = 1, 2, …`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum DiagFormula {
    /// `d_r = slope·r + intercept`.
    Linear { slope: f64, intercept: f64 },
    /// `d_r = radius·e^{mπ/r}`.
    UnitCircleHarmonic {
        #[serde(default = "one")]
        radius: f64,
    },
    /// Explicit leading entries; the section size may not exceed their count.
    Values { values: Vec<Quaternion> },
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpDescriptor {
    pub diag: DiagFormula,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<QMatrix>,
}

impl OpDescriptor {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn entry(&self, r: usize, m: UnitImaginary) -> Result<Quaternion> {
        let x = r as f64;
        Ok(match &self.diag {
            DiagFormula::Linear { slope, intercept } => Quaternion::real(slope * x + intercept),
            DiagFormula::UnitCircleHarmonic { radius } => {
                let th = PI / x;
                Quaternion::real(radius * th.cos()) + m.as_quaternion() * (radius * th.sin())
            }
            DiagFormula::Values { values } => *values.get(r - 1).ok_or_else(|| {
                Error::Domain(format!("descriptor lists {} entries, section needs {r}", values.len()))
            })?,
        })
    }

    /// The `n × n` section.
    pub fn section(&self, n: usize, m: UnitImaginary) -> Result<QMatrix> {
        let d = (1..=n).map(|r| self.entry(r, m)).collect::<Result<Vec<_>>>()?;
        let mut t = QMatrix::from_diag(&d);
        if let Some(b) = &self.band {
            for r in 0..b.n().min(n) {
                for c in 0..b.n().min(n) {
                    t[(r, c)] += b[(r, c)];
                }
            }
        }
        Ok(t)
    }
}

/// One line of the convergence table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncationRow {
    pub n: usize,
    pub op_norm_k: f64,
    pub hs_norm_k: f64,
    /// Snapped entries agree with the previous decomposed size on their common prefix.
    pub prefix_stable: bool,
    pub normal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Net points and values of the snapped diagonal, listed by coordinate index.
type Prefix = Vec<(NetPoint, Quaternion)>;

/// Reorders the diagonal so entry `r` belongs to the basis vector concentrated on coordinate `r`.
fn by_coordinate(dec: &Decomposition) -> Option<Prefix> {
    let n = dec.d.len();
    let mut slot: Vec<Option<(NetPoint, Quaternion)>> = vec![None; n];
    for c in 0..n {
        let r = (0..n)
            .max_by(|&a, &b| dec.u[(a, c)].modulus().total_cmp(&dec.u[(b, c)].modulus()))
            .unwrap_or(0);
        if slot[r].is_some() {
            return None;
        }
        slot[r] = Some((dec.net.points[c], dec.d[c]));
    }
    slot.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct TruncationConfig {
    pub epsilon: f64,
    pub mode: Mode,
    pub curve: Option<Curve>,
    pub axis: UnitImaginary,
    pub exec: Execution,
}

pub fn truncation_study(desc: &OpDescriptor, sizes: &[usize], cfg: &TruncationConfig) -> Result<Vec<TruncationRow>> {
    if sizes.is_empty() {
        return Err(Error::Domain("no section sizes given".into()));
    }
    if sizes[0] == 0 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("section sizes must be positive and strictly ascending".into()));
    }
    if !(cfg.epsilon > 0.0 && cfg.epsilon.is_finite()) {
        return Err(Error::Domain(format!("epsilon must be positive and finite, got {}", cfg.epsilon)));
    }
    if cfg.mode == Mode::Hs && cfg.curve.is_none() {
        return Err(Error::Precondition("Hilbert–Schmidt mode needs a curve".into()));
    }
    let sections = sizes
        .iter()
        .map(|&n| desc.section(n, cfg.axis))
        .collect::<Result<Vec<_>>>()?;

    let runs = cfg.exec.map(&sections, |t| -> Result<Option<Decomposition>> {
        if !classify(t)?.normal {
            return Ok(None);
        }
        match cfg.mode {
            Mode::Op => decompose_op_norm(t, cfg.epsilon, cfg.axis).map(Some),
            Mode::Hs => decompose_hs(t, cfg.epsilon, cfg.curve.as_ref().expect("checked"), cfg.axis).map(Some),
        }
    });

    let mut rows = Vec::with_capacity(sizes.len());
    let mut prev: Option<Prefix> = None;
    for (&n, run) in sizes.iter().zip(runs) {
        let failed = |normal: bool, error: Option<String>| TruncationRow {
            n,
            op_norm_k: f64::NAN,
            hs_norm_k: f64::NAN,
            prefix_stable: false,
            normal,
            error,
        };
        let dec = match run {
            Ok(Some(dec)) => dec,
            Ok(None) => {
                rows.push(failed(false, Some("section is not normal".into())));
                continue;
            }
            Err(e) => {
                rows.push(failed(true, Some(e.to_string())));
                continue;
            }
        };
        let cur = by_coordinate(&dec);
        let prefix_stable = match (&prev, &cur) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(p), Some(c)) => {
                let k = p.len().min(c.len());
                p[..k] == c[..k]
            }
        };
        rows.push(TruncationRow {
            n,
            op_norm_k: dec.norms.op,
            hs_norm_k: dec.norms.hs,
            prefix_stable,
            normal: true,
            error: None,
        });
        if cur.is_some() {
            prev = cur;
        }
    }
    Ok(rows)
}

pub fn rows_to_csv(rows: &[TruncationRow]) -> String {
    let mut out = String::from("n,op_norm_K,hs_norm_K,prefix_stable\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.n, r.op_norm_k, r.hs_norm_k, r.prefix_stable);
    }
    out
}
