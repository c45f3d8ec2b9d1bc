//! The right H-module `H^n` with its Hermitian quaternionic scalar product.
//!
//! `⟨u, v⟩ = Σ conj(u_r) v_r` is conjugate-linear in the first slot and
//! right-linear in the second, which is what makes `x = Σ φ_r ⟨φ_r, x⟩` hold.
//! Coefficients always multiply basis vectors from the right.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::tol;

/// A vector of `H^n`, serialized as an array of quaternion 4-arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QVector(pub Vec<Quaternion>);

impl QVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![Quaternion::ZERO; n])
    }

    /// The `k`-th standard unit vector.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = Quaternion::ONE;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[Quaternion] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `u·q`, scaling every component on the right.
    pub fn mul_right(&self, q: Quaternion) -> Self {
        Self(self.0.iter().map(|&c| c * q).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect())
    }

    /// `self -= v·q`.
    pub fn sub_mul_right(&mut self, v: &Self, q: Quaternion) {
        for (a, &b) in self.0.iter_mut().zip(&v.0) {
            *a -= b * q;
        }
    }

    fn same_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Shape(format!(
                "vector lengths {} and {} differ",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }
}

/// `⟨u, v⟩ = Σ_r conj(u_r)·v_r`.
pub fn inner(u: &QVector, v: &QVector) -> Result<Quaternion> {
    u.same_len(v)?;
    Ok(inner_unchecked(u, v))
}

pub(crate) fn inner_unchecked(u: &QVector, v: &QVector) -> Quaternion {
    u.0.iter().zip(&v.0).map(|(&a, &b)| a.conj() * b).sum()
}

/// An orthonormal family of `H^n`, complete when it has `n` members.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Basis {
    vectors: Vec<QVector>,
}

impl Basis {
    /// Checks `⟨φ_r, φ_s⟩ = δ_rs` within `1e-10`.
    pub fn new(vectors: Vec<QVector>) -> Result<Self> {
        Self::with_tolerance(vectors, tol::STRUCTURE)
    }

    pub fn with_tolerance(vectors: Vec<QVector>, tol: f64) -> Result<Self> {
        let n = vectors.first().map_or(0, QVector::len);
        if vectors.len() > n || vectors.iter().any(|v| v.len() != n) {
            return Err(Error::Shape("basis vectors must share one length n ≥ count".into()));
        }
        let dev = gram_deviation(&vectors);
        if dev > tol {
            return Err(Error::Precondition(format!(
                "family is not orthonormal (max Gram deviation {dev:.3e})"
            )));
        }
        Ok(Self { vectors })
    }

    pub fn standard(n: usize) -> Self {
        Self {
            vectors: (0..n).map(|k| QVector::unit(n, k)).collect(),
        }
    }

    pub fn vectors(&self) -> &[QVector] {
        &self.vectors
    }

    /// Number of members.
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Length of the member vectors.
    pub fn ambient_dim(&self) -> usize {
        self.vectors.first().map_or(0, QVector::len)
    }

    pub fn is_complete(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn into_vectors(self) -> Vec<QVector> {
        self.vectors
    }
}

/// Largest entrywise deviation of the Gram matrix from the identity.
pub fn gram_deviation(vectors: &[QVector]) -> f64 {
    let mut dev: f64 = 0.0;
    for (r, a) in vectors.iter().enumerate() {
        for (s, b) in vectors.iter().enumerate().skip(r) {
            let g = inner_unchecked(a, b);
            let target = if r == s { Quaternion::ONE } else { Quaternion::ZERO };
            dev = dev.max((g - target).modulus());
        }
    }
    dev
}

/// Coefficients `c_r = ⟨φ_r, x⟩`.
pub fn fourier_expand(x: &QVector, basis: &Basis) -> Result<Vec<Quaternion>> {
    if x.len() != basis.ambient_dim() {
        return Err(Error::Shape(format!(
            "vector of length {} against basis of H^{}",
            x.len(),
            basis.ambient_dim()
        )));
    }
    Ok(basis.vectors.iter().map(|phi| inner_unchecked(phi, x)).collect())
}

/// `Σ_r φ_r c_r`; the orthogonal projection of `x` when `c` came from [`fourier_expand`].
pub fn fourier_reconstruct(coeffs: &[Quaternion], basis: &Basis) -> Result<QVector> {
    if coeffs.len() != basis.dim() {
        return Err(Error::Shape(format!(
            "{} coefficients for a basis of {} vectors",
            coeffs.len(),
            basis.dim()
        )));
    }
    let mut out = QVector::zeros(basis.ambient_dim());
    for (phi, &c) in basis.vectors.iter().zip(coeffs) {
        for (o, &p) in out.0.iter_mut().zip(&phi.0) {
            *o += p * c;
        }
    }
    Ok(out)
}

/// Modified Gram–Schmidt over H with one re-orthogonalization pass.
///
/// `v'_k = v_k − Σ_{r<k} e_r ⟨e_r, v_k⟩`, then divided by its (real) norm.
pub fn gram_schmidt(vectors: &[QVector]) -> Result<Basis> {
    let n = vectors.first().map_or(0, QVector::len);
    if vectors.iter().any(|v| v.len() != n) {
        return Err(Error::Shape("vectors of different lengths".into()));
    }
    let mut out: Vec<QVector> = Vec::with_capacity(vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for _pass in 0..2 {
            for e in &out {
                let c = inner_unchecked(e, &w);
                w.sub_mul_right(e, c);
            }
        }
        let norm = w.norm();
        if norm < 1e-10 * v.norm().max(1.0) {
            return Err(Error::Rank(format!(
                "vector {k} is numerically dependent on its predecessors (residual {norm:.3e})"
            )));
        }
        out.push(w.scale(1.0 / norm));
    }
    Ok(Basis { vectors: out })
}
