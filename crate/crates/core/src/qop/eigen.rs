//! Right eigendecomposition `T v_r = v_r λ_r` of a normal quaternionic matrix.
//!
//! The Schur vectors of `χ(T)` span `C^{2n}`; mapped back to `H^n` each one is a
//! right eigenvector, but the `2n` of them come in pairs spanning the same
//! quaternionic line (`v` and `v·n1` both land in `C^{2n}`). A pivoted
//! quaternionic Gram–Schmidt over all candidates picks `n` of them that form
//! an orthonormal H-basis; each eigenvalue is then read off as a Rayleigh
//! quotient and rotated into `C_m^+` by `v ↦ v·n1` when it lands below the axis.

use num_complex::Complex64;

use super::embed::{complex_to_vector, embed_in};
use super::QMatrix;
use crate::error::{Error, Result};
use crate::linalg;
use crate::qspace::{inner_unchecked, QVector};
use crate::quat::SliceFrame;

/// Quaternionic unitary `V` and standard eigenvalues with `TV = V diag(λ)`.
#[derive(Clone, Debug)]
pub struct RightEigen {
    /// Columns are the eigenvectors.
    pub vectors: QMatrix,
    /// Eigenvalues in `C_m^+`, as complex numbers over the frame axis.
    pub values: Vec<Complex64>,
    /// `‖TV − V diag(λ)‖_F`.
    pub residual: f64,
}

pub fn right_eigen(t: &QMatrix, frame: &SliceFrame) -> Result<RightEigen> {
    let n = t.n();
    if n == 0 {
        return Ok(RightEigen {
            vectors: QMatrix::zeros(0),
            values: vec![],
            residual: 0.0,
        });
    }
    let chi = embed_in(t, frame);
    let schur = linalg::schur(chi.as_cmatrix())?;

    let mut residuals: Vec<QVector> = (0..2 * n)
        .map(|k| complex_to_vector(&schur.q.column(k), frame))
        .collect();
    let mut weight: Vec<f64> = residuals.iter().map(|v| v.norm().powi(2)).collect();
    let mut accepted: Vec<QVector> = Vec::with_capacity(n);

    while accepted.len() < n {
        let (pick, &best) = weight
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |acc, (i, w)| if *w > *acc.1 { (i, w) } else { acc });
        if best < 1e-6 {
            return Err(Error::Numerical(format!(
                "eigenvector extraction stalled after {} of {n} vectors",
                accepted.len()
            )));
        }
        let mut v = residuals[pick].clone();
        for e in &accepted {
            let c = inner_unchecked(e, &v);
            v.sub_mul_right(e, c);
        }
        let v = v.scale(1.0 / v.norm());
        weight[pick] = f64::NEG_INFINITY;
        for (k, r) in residuals.iter_mut().enumerate() {
            if weight[k] == f64::NEG_INFINITY {
                continue;
            }
            let c = inner_unchecked(&v, r);
            r.sub_mul_right(&v, c);
            weight[k] = r.norm().powi(2);
        }
        accepted.push(v);
    }

    let n1 = frame.n1();
    let mut values = Vec::with_capacity(n);
    for v in accepted.iter_mut() {
        let tv = t.apply(v)?;
        let mut lambda = frame.to_complex(inner_unchecked(v, &tv));
        if lambda.im < 0.0 {
            *v = v.mul_right(n1);
            lambda = lambda.conj();
        }
        values.push(lambda);
    }

    let vectors = QMatrix::from_columns(&accepted)?;
    let lam_q: Vec<_> = values.iter().map(|&c| frame.from_complex(c)).collect();
    let residual = t
        .matmul(&vectors)
        .sub(&vectors.mul_diag_right(&lam_q))
        .frobenius();
    Ok(RightEigen {
        vectors,
        values,
        residual,
    })
}
