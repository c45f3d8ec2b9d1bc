use serde::{Deserialize, Serialize};

use super::curve::Curve;
use super::net::{NetPoint, NetSpec, Snap};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::qop::{hs_norm, op_norm, QMatrix};
use crate::quat::{Quaternion, SliceFrame, UnitImaginary};
use crate::slice::{extend, find_J, restrict, SliceMatrix};

/// Norm in which `K` is small.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Op,
    Hs,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "op" => Ok(Mode::Op),
            "hs" => Ok(Mode::Hs),
            other => Err(Error::Format(format!("unknown mode '{other}', expected op or hs"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub op: f64,
    pub hs: f64,
}

/// The net a decomposition snapped to and the point used for each `d_r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetRecord {
    pub spec: NetSpec,
    pub points: Vec<NetPoint>,
}

/// `N = U diag(d) U* + K` with `U` unitary and `K` small.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub epsilon: f64,
    pub mode: Mode,
    pub axis: UnitImaginary,
    #[serde(rename = "U")]
    pub u: QMatrix,
    pub d: Vec<Quaternion>,
    #[serde(rename = "K")]
    pub k: QMatrix,
    pub norms: Norms,
    pub net: NetRecord,
}

impl Decomposition {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// `U diag(d) U*`.
    pub fn diagonal_part(&self) -> QMatrix {
        self.u.mul_diag_right(&self.d).matmul(&self.u.adjoint())
    }

    /// Reorders the diagonalizing basis: column `c` of the result is column `perm[c]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.d.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Shape("not a permutation of the basis".into()));
        }
        let cols = self.u.columns();
        Ok(Self {
            u: QMatrix::from_columns(&perm.iter().map(|&p| cols[p].clone()).collect::<Vec<_>>())?,
            d: perm.iter().map(|&p| self.d[p]).collect(),
            net: NetRecord {
                spec: self.net.spec.clone(),
                points: perm.iter().map(|&p| self.net.points[p]).collect(),
            },
            ..self.clone()
        })
    }
}

/// Splitting with `op_norm(K) ≤ ε/(2√2) < ε` and `d_r` on the level-0 grid net.
pub fn decompose_op_norm(n: &QMatrix, epsilon: f64, m: UnitImaginary) -> Result<Decomposition> {
    let net = NetSpec::Grid { epsilon };
    net.check()?;
    let (w, lambda, s) = diagonalize(n, m)?;
    let snaps: Vec<Snap> = lambda.iter().map(|&z| net.snap(z, 0)).collect();
    assemble(n, w, &snaps, net, Mode::Op, &s)
}

/// Splitting with `hs_norm(K) < ε`, the spectrum lying on `curve`.
///
/// Eigenvalues are visited in order of their curve parameter; the one at
/// position `p` is snapped at the coarsest level whose displacement is at most
/// `ε·2^{−(p+2)/2}`, or at the finest representable level if none is.
pub fn decompose_hs(n: &QMatrix, epsilon: f64, curve: &Curve, m: UnitImaginary) -> Result<Decomposition> {
    let net = NetSpec::Curve {
        epsilon,
        curve: curve.clone(),
    };
    net.check()?;
    let (w, lambda, s) = diagonalize(n, m)?;

    let params: Vec<(f64, f64)> = lambda.iter().map(|&z| curve.project([z[0], z[1].abs()])).collect();
    let off: Vec<String> = lambda
        .iter()
        .zip(&params)
        .filter(|(_, p)| p.1 > 1e-6)
        .map(|(z, p)| format!("({}, {}) at distance {:.3e}", z[0], z[1].abs(), p.1))
        .collect();
    if !off.is_empty() {
        return Err(Error::Precondition(format!("spectrum leaves the curve: {}", off.join("; "))));
    }

    let mut order: Vec<usize> = (0..lambda.len()).collect();
    order.sort_by(|&a, &b| params[a].0.partial_cmp(&params[b].0).expect("finite curve parameter"));
    let top = net.max_level(curve.length().max(epsilon));
    let snaps: Vec<Snap> = order
        .iter()
        .enumerate()
        .map(|(pos, &idx)| {
            let target = epsilon * 2f64.powf(-((pos + 2) as f64) / 2.0);
            let mut best = net.snap(lambda[idx], 0);
            for level in 0..=top {
                let s = net.snap(lambda[idx], level);
                if s.displacement <= target {
                    return s;
                }
                if s.displacement < best.displacement {
                    best = s;
                }
            }
            best
        })
        .collect();
    let w = CMatrix::from_fn(w.rows(), w.cols(), |r, c| w[(r, order[c])]);
    let dec = assemble(n, w, &snaps, net, Mode::Hs, &s)?;
    if dec.norms.hs >= epsilon {
        return Err(Error::Numerical(format!(
            "Hilbert–Schmidt norm {:.3e} of K misses ε = {epsilon}",
            dec.norms.hs
        )));
    }
    Ok(dec)
}

/// `J`, the restriction `N₊` and its unitary diagonalization `N₊ = W diag(λ) W*`.
fn diagonalize(n: &QMatrix, m: UnitImaginary) -> Result<(CMatrix, Vec<[f64; 2]>, crate::slice::SliceStructure)> {
    let s = find_J(n, m)?;
    let a = restrict(n, &s)?;
    let schur = linalg::schur(a.as_cmatrix())?;
    let lambda = schur.eigenvalues().iter().map(|l| [l.re, l.im]).collect();
    Ok((schur.q, lambda, s))
}

fn assemble(
    n: &QMatrix,
    w: CMatrix,
    snaps: &[Snap],
    net: NetSpec,
    mode: Mode,
    s: &crate::slice::SliceStructure,
) -> Result<Decomposition> {
    let axis = s.axis();
    let frame = SliceFrame::new(axis);
    let snapped: Vec<_> = snaps
        .iter()
        .map(|sn| num_complex::Complex64::new(sn.value[0], sn.value[1]))
        .collect();
    let dp = w.matmul(&CMatrix::from_diag(&snapped)).matmul(&w.adjoint());
    let a = restrict(n, s)?;
    let kp = SliceMatrix::from_cmatrix(axis, a.as_cmatrix().sub(&dp))?;
    let k = extend(&kp, s)?;
    let u = s
        .basis_matrix()
        .matmul(&SliceMatrix::from_cmatrix(axis, w)?.to_qmatrix());
    let d = snapped.iter().map(|&c| frame.from_complex(c)).collect();
    let norms = Norms {
        op: op_norm(&k)?,
        hs: hs_norm(&k),
    };
    let epsilon = net.epsilon();
    if mode == Mode::Op && norms.op >= epsilon {
        return Err(Error::Numerical(format!(
            "operator norm {:.3e} of K misses ε = {epsilon}",
            norms.op
        )));
    }
    Ok(Decomposition {
        epsilon,
        mode,
        axis,
        u,
        d,
        k,
        norms,
        net: NetRecord {
            spec: net,
            points: snaps.iter().map(|s| s.point).collect(),
        },
    })
}
