//! Bounded right-linear operators on `H^n` as quaternionic matrices.
//!
//! `(Tx)_r = Σ_s T_rs x_s`: matrix entries act from the left, so
//! `T(xq) = (Tx)q` holds for every matrix. Norms and every spectral question
//! are answered through the complex embedding in [`embed`].

mod eigen;
mod embed;
mod functions;

use serde::{Deserialize, Serialize};

pub use eigen::{right_eigen, RightEigen};
pub use embed::{embed, embed_in, unembed, unembed_in, unembed_projected, ComplexBlockMatrix};
pub use functions::{delta_q, z_inverse, z_transform};

use crate::error::{Error, Result};
use crate::linalg;
use crate::par;
use crate::qspace::{Basis, QVector};
use crate::quat::{Quaternion, SliceFrame};
use crate::tol;

/// `n × n` quaternionic matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    n: usize,
    entries: Vec<Quaternion>,
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (r, c): (usize, usize)) -> &Quaternion {
        &self.entries[r * self.n + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quaternion {
        &mut self.entries[r * self.n + c]
    }
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![Quaternion::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![Quaternion::ONE; n])
    }

    pub fn from_diag(d: &[Quaternion]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &q) in d.iter().enumerate() {
            m[(i, i)] = q;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        Self { n, entries }
    }

    /// Builds a matrix from nested rows; rejects ragged input.
    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!(
                    "row {r} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[QVector]) -> Result<Self> {
        let n = cols.len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::Shape("columns must have length equal to their count".into()));
        }
        Ok(Self::from_fn(n, |r, c| cols[c].0[r]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Quaternion] {
        &self.entries[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Quaternion>> {
        (0..self.n).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> QVector {
        QVector((0..self.n).map(|r| self[(r, c)]).collect())
    }

    pub fn columns(&self) -> Vec<QVector> {
        (0..self.n).map(|c| self.column(c)).collect()
    }

    pub fn diag(&self) -> Vec<Quaternion> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    /// `(T*)_rs = conj(T_sr)`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = QMatrix::zeros(n);
        par::for_each_row(&mut out.entries, n, |i, row| {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Quaternion::ZERO {
                    continue;
                }
                for (o, &b) in row.iter_mut().zip(&rhs.entries[k * n..(k + 1) * n]) {
                    *o += a * b;
                }
            }
        });
        out
    }

    pub fn apply(&self, x: &QVector) -> Result<QVector> {
        if x.len() != self.n {
            return Err(Error::Shape(format!(
                "vector of length {} for a {}x{} matrix",
                x.len(),
                self.n,
                self.n
            )));
        }
        Ok(QVector(
            (0..self.n)
                .map(|r| self.row(r).iter().zip(&x.0).map(|(&a, &b)| a * b).sum())
                .collect(),
        ))
    }

    pub fn add(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Self {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Self {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|&a| a * s).collect(),
        }
    }

    /// Entrywise right multiplication `T_rs · q`.
    pub fn mul_right(&self, q: Quaternion) -> QMatrix {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|&a| a * q).collect(),
        }
    }

    /// `T · diag(d)`: column `c` multiplied on the right by `d_c`.
    pub fn mul_diag_right(&self, d: &[Quaternion]) -> QMatrix {
        assert_eq!(self.n, d.len());
        Self::from_fn(self.n, |r, c| self[(r, c)] * d[c])
    }

    /// Frobenius norm `(Σ |T_rs|²)^{1/2}`.
    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for r in 0..self.n {
            for c in 0..self.n {
                if r != c {
                    s += self[(r, c)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|q| q.is_finite())
    }

    /// Serializes to the canonical `{"n": .., "entries": [[[w,x,y,z], ..], ..]}` form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&QMatrixFile {
            n: self.n,
            entries: self.rows(),
        })
        .expect("QMatrix serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: QMatrixFile = serde_json::from_str(s)?;
        file.try_into()
    }
}

/// On-disk layout of a [`QMatrix`].
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QMatrixFile {
    n: usize,
    entries: Vec<Vec<Quaternion>>,
}

impl TryFrom<QMatrixFile> for QMatrix {
    type Error = Error;
    fn try_from(f: QMatrixFile) -> Result<Self> {
        if f.entries.len() != f.n {
            return Err(Error::Format(format!(
                "declared n = {} but {} rows present",
                f.n,
                f.entries.len()
            )));
        }
        let m = QMatrix::from_rows(f.entries)?;
        if !m.is_finite() {
            return Err(Error::Format("non-finite entry".into()));
        }
        Ok(m)
    }
}

impl Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QMatrixFile {
            n: self.n,
            entries: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = QMatrixFile::deserialize(d)?;
        f.try_into().map_err(serde::de::Error::custom)
    }
}

impl Basis {
    /// The basis vectors as the columns of a matrix.
    pub fn to_matrix(&self) -> Result<QMatrix> {
        QMatrix::from_columns(self.vectors())
    }
}

/// Operator classes decided by scale-aware residuals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub self_adjoint: bool,
    pub anti_self_adjoint: bool,
    pub normal: bool,
    pub unitary: bool,
}

pub fn classify(t: &QMatrix) -> Result<Classification> {
    classify_with(t, tol::STRUCTURE)
}

/// Each flag holds when its defining residual (Frobenius) is below `tol·max(1, ‖T‖²)`.
pub fn classify_with(t: &QMatrix, tol: f64) -> Result<Classification> {
    let norm = op_norm(t)?;
    let bound = tol * 1f64.max(norm * norm);
    let adj = t.adjoint();
    let tt_star = t.matmul(&adj);
    let t_star_t = adj.matmul(t);
    let id = QMatrix::identity(t.n);
    Ok(Classification {
        self_adjoint: t.sub(&adj).frobenius() < bound,
        anti_self_adjoint: t.add(&adj).frobenius() < bound,
        normal: tt_star.sub(&t_star_t).frobenius() < bound,
        unitary: tt_star.sub(&id).frobenius() < bound && t_star_t.sub(&id).frobenius() < bound,
    })
}

/// `‖T‖ = sup_{‖u‖=1} ‖Tu‖`, the largest singular value of the complex embedding.
pub fn op_norm(t: &QMatrix) -> Result<f64> {
    linalg::spectral_norm(embed(t).as_cmatrix())
}

/// `‖T‖₂ = (Σ_r ‖Tφ_r‖²)^{1/2}`, computed entrywise.
pub fn hs_norm(t: &QMatrix) -> f64 {
    t.frobenius()
}

/// `(Σ_r ‖Tφ_r‖²)^{1/2}` in an arbitrary orthonormal basis.
pub fn hs_norm_in_basis(t: &QMatrix, basis: &Basis) -> Result<f64> {
    let mut s = 0.0;
    for phi in basis.vectors() {
        let v = t.apply(phi)?;
        s += v.norm() * v.norm();
    }
    Ok(s.sqrt())
}

/// Residual `‖JT − TJ‖_F`.
pub fn commutator_norm(a: &QMatrix, b: &QMatrix) -> f64 {
    a.matmul(b).sub(&b.matmul(a)).frobenius()
}

/// Entries of a matrix over `C_m` (written as complex numbers in `frame`).
pub(crate) fn to_slice_entries(t: &QMatrix, frame: &SliceFrame) -> (Vec<num_complex::Complex64>, f64) {
    let mut leak: f64 = 0.0;
    let entries = t
        .entries
        .iter()
        .map(|&q| {
            let (a, b) = frame.split(q);
            leak = leak.max(b.norm());
            a
        })
        .collect();
    (entries, leak)
}
