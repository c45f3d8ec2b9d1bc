//! The complex adjoint `χ(T) = [[A, B], [−conj(B), conj(A)]]` for `T = A + B·n1`.
//!
//! `A, B` are the `C_m` components of `T` in a [`SliceFrame`]. Under the map
//! `x = x1 + x2·n1 ↦ [x1; −conj(x2)]`, `χ(T)` is exactly the matrix of `T` as a
//! complex-linear map of `C^{2n}`, which makes `χ` an isometric `*`-algebra
//! monomorphism.

use num_complex::Complex64;

use super::QMatrix;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::qspace::QVector;
use crate::quat::SliceFrame;
use crate::tol;

/// A `2n × 2n` complex matrix carrying the block symmetry of `χ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBlockMatrix {
    frame: SliceFrame,
    m: CMatrix,
}

impl ComplexBlockMatrix {
    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_cmatrix(self) -> CMatrix {
        self.m
    }

    pub fn frame(&self) -> &SliceFrame {
        &self.frame
    }

    /// Half the side length.
    pub fn n(&self) -> usize {
        self.m.rows() / 2
    }
}

/// `χ(T)` over the default slice `C_i`.
pub fn embed(t: &QMatrix) -> ComplexBlockMatrix {
    embed_in(t, &SliceFrame::default())
}

pub fn embed_in(t: &QMatrix, frame: &SliceFrame) -> ComplexBlockMatrix {
    let n = t.n();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let (a, b) = frame.split(t[(r, c)]);
            m[(r, c)] = a;
            m[(r, c + n)] = b;
            m[(r + n, c)] = -b.conj();
            m[(r + n, c + n)] = a.conj();
        }
    }
    ComplexBlockMatrix { frame: *frame, m }
}

/// Inverse of [`embed`]; rejects matrices off the block pattern.
pub fn unembed(m: &ComplexBlockMatrix) -> Result<QMatrix> {
    unembed_in(&m.m, &m.frame)
}

/// Strict inverse of [`embed_in`] for a raw complex matrix.
pub fn unembed_in(m: &CMatrix, frame: &SliceFrame) -> Result<QMatrix> {
    let (t, dev) = unembed_parts(m, frame)?;
    let scale = 1f64.max(m.max_abs());
    if dev > tol::STRUCTURE * scale {
        return Err(Error::Format(format!(
            "matrix violates the [[A, B], [-conj B, conj A]] pattern by {dev:.3e}"
        )));
    }
    Ok(t)
}

/// Nearest quaternionic matrix, averaging the two copies of each block.
pub fn unembed_projected(m: &CMatrix, frame: &SliceFrame) -> Result<QMatrix> {
    Ok(unembed_parts(m, frame)?.0)
}

fn unembed_parts(m: &CMatrix, frame: &SliceFrame) -> Result<(QMatrix, f64)> {
    if m.rows() != m.cols() || !m.rows().is_multiple_of(2) {
        return Err(Error::Format(format!(
            "expected an even square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows() / 2;
    let mut dev: f64 = 0.0;
    let t = QMatrix::from_fn(n, |r, c| {
        let a1 = m[(r, c)];
        let a2 = m[(r + n, c + n)].conj();
        let b1 = m[(r, c + n)];
        let b2 = -m[(r + n, c)].conj();
        dev = dev.max((a1 - a2).norm()).max((b1 - b2).norm());
        frame.join((a1 + a2) * 0.5, (b1 + b2) * 0.5)
    });
    Ok((t, dev))
}

/// `x ↦ [x1; −conj(x2)]`.
#[cfg(test)]
pub(crate) fn vector_to_complex(x: &QVector, frame: &SliceFrame) -> Vec<Complex64> {
    let n = x.len();
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * n];
    for (r, &q) in x.0.iter().enumerate() {
        let (a, b) = frame.split(q);
        out[r] = a;
        out[r + n] = -b.conj();
    }
    out
}

/// Inverse of [`vector_to_complex`].
pub(crate) fn complex_to_vector(u: &[Complex64], frame: &SliceFrame) -> QVector {
    let n = u.len() / 2;
    QVector((0..n).map(|r| frame.join(u[r], -u[r + n].conj())).collect())
}
