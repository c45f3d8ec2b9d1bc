//! Slice structures: a complex structure `J` commuting with an operator, the
//! slice space `H_+^{Jm} = {u : Ju = um}`, and the restriction / extension
//! correspondence between right-linear operators commuting with `J` and
//! `C_m`-linear operators on `H_+^{Jm}`.
//!
//! Everything is expressed in an orthonormal H-basis `{e_r}` of `H^n` lying in
//! `H_+^{Jm}`; such a basis exists for every anti-self-adjoint unitary `J` and is
//! simultaneously a `C_m`-basis of the slice space. In that basis restriction
//! is `A = E* T E` (entries forced into `C_m`) and extension is `E A E*`.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::qop::{self, classify, commutator_norm, hs_norm, op_norm, right_eigen, QMatrix};
use crate::qspace::{fourier_expand, fourier_reconstruct, Basis, QVector};
use crate::quat::{Quaternion, SliceFrame, UnitImaginary};
use crate::sample;
use crate::tol;

/// `J`, the axis `m`, and an orthonormal H-basis `{e_r}` with `J e_r = e_r m`.
#[derive(Clone, Debug)]
pub struct SliceStructure {
    j: QMatrix,
    frame: SliceFrame,
    plus_basis: Basis,
    basis_matrix: QMatrix,
}

impl SliceStructure {
    /// Validates the invariants of a caller-supplied `(J, m, {e_r})`.
    pub fn new(j: QMatrix, m: UnitImaginary, plus_basis: Basis) -> Result<Self> {
        let frame = SliceFrame::new(m);
        if plus_basis.ambient_dim() != j.n() || !plus_basis.is_complete() {
            return Err(Error::Shape(format!(
                "slice basis must hold {} vectors of length {}",
                j.n(),
                j.n()
            )));
        }
        let basis_matrix = plus_basis.to_matrix()?;
        let s = Self {
            j,
            frame,
            plus_basis,
            basis_matrix,
        };
        s.check_invariants()?;
        Ok(s)
    }

    /// Completes an anti-self-adjoint unitary `J` with a slice basis.
    pub fn from_j(j: QMatrix, m: UnitImaginary) -> Result<Self> {
        check_complex_structure(&j)?;
        let frame = SliceFrame::new(m);
        let eig = right_eigen(&j, &frame)?;
        Self::new(j, m, Basis::new(eig.vectors.columns())?)
    }

    pub fn j(&self) -> &QMatrix {
        &self.j
    }

    pub fn axis(&self) -> UnitImaginary {
        self.frame.axis()
    }

    pub fn frame(&self) -> &SliceFrame {
        &self.frame
    }

    pub fn plus_basis(&self) -> &Basis {
        &self.plus_basis
    }

    /// The slice basis as the columns of a quaternionic unitary.
    pub fn basis_matrix(&self) -> &QMatrix {
        &self.basis_matrix
    }

    /// `dim_{C_m} H_+^{Jm}`, equal to `dim_H H = n`.
    pub fn plus_dimension(&self) -> usize {
        self.plus_basis.dim()
    }

    /// `{e_r · n1}`, an orthonormal `C_m`-basis of `H_-^{Jm}`.
    pub fn minus_basis(&self) -> Vec<QVector> {
        let n1 = self.frame.n1();
        self.plus_basis.vectors().iter().map(|e| e.mul_right(n1)).collect()
    }

    /// `‖J x − x m‖`.
    pub fn plus_defect(&self, x: &QVector) -> Result<f64> {
        let m = self.axis().as_quaternion();
        Ok(self.j.apply(x)?.sub(&x.mul_right(m)).norm())
    }

    /// `x = x₊ + x₋` with `x± = (x ∓ J x m) / 2 ∈ H_±^{Jm}`.
    pub fn split_plus_minus(&self, x: &QVector) -> Result<(QVector, QVector)> {
        let m = self.axis().as_quaternion();
        let jxm = self.j.apply(x)?.mul_right(m);
        Ok((x.sub(&jxm).scale(0.5), x.add(&jxm).scale(0.5)))
    }

    fn check_invariants(&self) -> Result<()> {
        check_complex_structure(&self.j)?;
        let worst = self
            .plus_basis
            .vectors()
            .iter()
            .map(|e| self.plus_defect(e))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        if worst >= 1e-9 {
            return Err(Error::Precondition(format!(
                "basis vector leaves H_+ (‖Je − em‖ = {worst:.3e})"
            )));
        }
        Ok(())
    }
}

/// `J* = −J` and `J*J = I` within `1e-10`.
fn check_complex_structure(j: &QMatrix) -> Result<()> {
    let id = QMatrix::identity(j.n());
    let anti = j.add(&j.adjoint()).frobenius();
    let unit = j.adjoint().matmul(j).sub(&id).frobenius();
    if anti >= tol::STRUCTURE || unit >= tol::STRUCTURE {
        return Err(Error::Precondition(format!(
            "J is not an anti-self-adjoint unitary (‖J+J*‖ = {anti:.3e}, ‖J*J−I‖ = {unit:.3e})"
        )));
    }
    Ok(())
}

/// Matrix of a `C_m`-linear operator on `H_+^{Jm}` in the slice basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceMatrix {
    axis: UnitImaginary,
    m: CMatrix,
}

impl SliceMatrix {
    /// Entries `α + iβ` stand for `α + mβ`.
    pub fn from_cmatrix(axis: UnitImaginary, m: CMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::Shape("slice matrices are square".into()));
        }
        Ok(Self { axis, m })
    }

    pub fn identity(n: usize, axis: UnitImaginary) -> Self {
        Self {
            axis,
            m: CMatrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn axis(&self) -> UnitImaginary {
        self.axis
    }

    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.m[(r, c)]
    }

    /// The same matrix with entries written as quaternions `α + mβ`.
    pub fn to_qmatrix(&self) -> QMatrix {
        let f = SliceFrame::new(self.axis);
        QMatrix::from_fn(self.n(), |r, c| f.from_complex(self.m[(r, c)]))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            axis: self.axis,
            m: self.m.adjoint(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.same_axis(rhs)?;
        Ok(Self {
            axis: self.axis,
            m: self.m.matmul(&rhs.m),
        })
    }

    pub fn op_norm(&self) -> Result<f64> {
        linalg::spectral_norm(&self.m)
    }

    pub fn hs_norm(&self) -> f64 {
        self.m.frobenius()
    }

    /// Normality as a complex matrix, `‖AA* − A*A‖ < tol·max(1, ‖A‖²)`.
    pub fn is_normal(&self) -> Result<bool> {
        let norm = self.op_norm()?;
        Ok(self.m.normality_residual() < tol::STRUCTURE * 1f64.max(norm * norm))
    }

    fn same_axis(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() || !self.axis.approx_eq(other.axis, tol::SCALAR) {
            return Err(Error::Shape("slice matrices over different axes or sizes".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SliceMatrixFile {
            n: self.n(),
            axis: self.axis,
            entries: (0..self.n())
                .map(|r| (0..self.n()).map(|c| [self.m[(r, c)].re, self.m[(r, c)].im]).collect())
                .collect(),
        })
        .expect("slice matrix serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: SliceMatrixFile = serde_json::from_str(s)?;
        if f.entries.len() != f.n || f.entries.iter().any(|r| r.len() != f.n) {
            return Err(Error::Format("slice matrix rows are ragged or miscounted".into()));
        }
        let m = CMatrix::from_fn(f.n, f.n, |r, c| Complex64::new(f.entries[r][c][0], f.entries[r][c][1]));
        Self::from_cmatrix(f.axis, m)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SliceMatrixFile {
    n: usize,
    axis: UnitImaginary,
    entries: Vec<Vec<[f64; 2]>>,
}

/// Constructs `J` commuting with a normal `T`, together with its slice basis.
///
/// `T = V diag(λ) V*` with `λ_r ∈ C_m^+`; then `J = V diag(m) V*` and the
/// columns of `V` satisfy `J v_r = v_r m`.
#[allow(non_snake_case)]
pub fn find_J(t: &QMatrix, m: UnitImaginary) -> Result<SliceStructure> {
    if !classify(t)?.normal {
        return Err(Error::Precondition("find_J needs a normal operator".into()));
    }
    let frame = SliceFrame::new(m);
    let eig = right_eigen(t, &frame)?;
    let scale = 1f64.max(hs_norm(t));
    if eig.residual > tol::COMMUTE * scale {
        return Err(Error::Numerical(format!(
            "right eigendecomposition residual {:.3e} exceeds {:.3e}",
            eig.residual,
            tol::COMMUTE * scale
        )));
    }
    let v = &eig.vectors;
    let j = v
        .mul_diag_right(&vec![m.as_quaternion(); t.n()])
        .matmul(&v.adjoint());
    SliceStructure::new(j, m, Basis::new(v.columns())?)
}

/// `(T₊)_sr = ⟨e_s, T e_r⟩`, required to lie in `C_m`.
pub fn restrict(t: &QMatrix, s: &SliceStructure) -> Result<SliceMatrix> {
    if t.n() != s.j.n() {
        return Err(Error::Shape(format!(
            "operator on H^{} against slice structure on H^{}",
            t.n(),
            s.j.n()
        )));
    }
    let scale = 1f64.max(hs_norm(t));
    let comm = commutator_norm(&s.j, t);
    if comm > tol::COMMUTE * scale {
        return Err(Error::Precondition(format!(
            "operator does not commute with J (‖JT − TJ‖ = {comm:.3e})"
        )));
    }
    let e = &s.basis_matrix;
    let a = e.adjoint().matmul(t).matmul(e);
    let (entries, leak) = qop::to_slice_entries(&a, &s.frame);
    if leak > tol::SLICE * scale {
        return Err(Error::Consistency(format!(
            "restricted entries leave C_m by {leak:.3e}"
        )));
    }
    let n = t.n();
    SliceMatrix::from_cmatrix(s.axis(), CMatrix::from_fn(n, n, |r, c| entries[r * n + c]))
}

/// The unique right-linear `T̃` with `T̃ e_r = Σ_s e_s A_sr`.
pub fn extend(a: &SliceMatrix, s: &SliceStructure) -> Result<QMatrix> {
    if a.n() != s.j.n() {
        return Err(Error::Shape(format!(
            "slice matrix of size {} against H^{}",
            a.n(),
            s.j.n()
        )));
    }
    if !a.axis.approx_eq(s.axis(), tol::SCALAR) {
        return Err(Error::Shape("slice matrix axis differs from the structure axis".into()));
    }
    let e = &s.basis_matrix;
    Ok(e.matmul(&a.to_qmatrix()).matmul(&e.adjoint()))
}

/// Checks that the given family, asserted to lie in `H_+^{Jm}`, is an H-basis of `H^n`.
pub fn basis_transfer(plus: &[QVector], s: &SliceStructure) -> Result<Basis> {
    for (r, e) in plus.iter().enumerate() {
        let d = s.plus_defect(e)?;
        if d >= 1e-9 {
            return Err(Error::Precondition(format!(
                "vector {r} is not in H_+ (‖Je − em‖ = {d:.3e})"
            )));
        }
    }
    let basis = Basis::new(plus.to_vec())?;
    if !basis.is_complete() {
        return Err(Error::Precondition(format!(
            "{} vectors cannot span H^{}",
            basis.dim(),
            basis.ambient_dim()
        )));
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..4 {
        let x = sample::random_vector(basis.ambient_dim(), &mut rng);
        let back = fourier_reconstruct(&fourier_expand(&x, &basis)?, &basis)?;
        let err = back.sub(&x).norm();
        if err > tol::STRUCTURE * (1.0 + x.norm()) {
            return Err(Error::Consistency(format!("Fourier reconstruction error {err:.3e}")));
        }
    }
    Ok(basis)
}

/// Outcome of [`transfer_checks`].
#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub hs_norm: f64,
    pub hs_norm_plus: f64,
    pub op_norm: f64,
    pub op_norm_plus: f64,
    pub normal: bool,
    pub normal_plus: bool,
    /// Off-diagonal Frobenius mass of `T₊` in the slice basis.
    pub plus_off_diagonal: f64,
    /// `‖T₊W − W diag(μ)‖` for the Schur basis `W` of `T₊`.
    pub plus_witness_residual: f64,
    /// `‖TΨ − Ψ diag(μ)‖` for the lifted witness `Ψ = E W`.
    pub lifted_witness_residual: f64,
    /// `max_r ‖Jψ_r − ψ_r m‖`; the lifted witness stays inside `H_+`.
    pub lifted_plus_defect: f64,
    pub failures: Vec<String>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Audits the transfer of norms, normality and diagonality between `T` and `T₊`.
pub fn transfer_checks(t: &QMatrix, s: &SliceStructure) -> Result<TransferReport> {
    let a = restrict(t, s)?;
    let mut failures = Vec::new();

    let (hs_t, hs_p) = (hs_norm(t), a.hs_norm());
    if (hs_t - hs_p).abs() > tol::SLICE * 1f64.max(hs_t) {
        failures.push(format!("Hilbert–Schmidt norms differ: {hs_t} vs {hs_p}"));
    }
    let (op_t, op_p) = (op_norm(t)?, a.op_norm()?);
    if (op_t - op_p).abs() > tol::SLICE * 1f64.max(op_t) {
        failures.push(format!("operator norms differ: {op_t} vs {op_p}"));
    }
    let normal = classify(t)?.normal;
    let normal_plus = a.is_normal()?;
    if normal != normal_plus {
        failures.push(format!("normality differs: T {normal}, T+ {normal_plus}"));
    }

    let schur = linalg::schur(a.as_cmatrix())?;
    let mu: Vec<Quaternion> = schur.t.diag().iter().map(|&c| s.frame.from_complex(c)).collect();
    let w = SliceMatrix::from_cmatrix(s.axis(), schur.q.clone())?.to_qmatrix();
    let plus_res = a
        .as_cmatrix()
        .matmul(&schur.q)
        .sub(&schur.q.matmul(&CMatrix::from_diag(&schur.t.diag())))
        .frobenius();
    let psi = s.basis_matrix.matmul(&w);
    let lifted_res = t.matmul(&psi).sub(&psi.mul_diag_right(&mu)).frobenius();
    let lifted_defect = psi
        .columns()
        .iter()
        .map(|v| s.plus_defect(v))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let scale = 1f64.max(op_t);
    let diag_bound = tol::COMMUTE * scale;
    if (plus_res < diag_bound) != (lifted_res < diag_bound) {
        failures.push(format!(
            "diagonality does not transfer: T+ witness {plus_res:.3e}, lifted witness {lifted_res:.3e}"
        ));
    }
    if lifted_defect >= 1e-9 {
        failures.push(format!("lifted witness leaves H_+ by {lifted_defect:.3e}"));
    }
    let plus_off = a.as_cmatrix().off_diagonal_norm();
    if plus_off < diag_bound {
        // T₊ diagonal in {e_r} makes T diagonal in the same basis with the same entries
        let d: Vec<Quaternion> = a.as_cmatrix().diag().iter().map(|&c| s.frame.from_complex(c)).collect();
        let r = t.matmul(&s.basis_matrix).sub(&s.basis_matrix.mul_diag_right(&d)).frobenius();
        if r >= diag_bound {
            failures.push(format!("T is not diagonal in the slice basis ({r:.3e})"));
        }
    }

    Ok(TransferReport {
        hs_norm: hs_t,
        hs_norm_plus: hs_p,
        op_norm: op_t,
        op_norm_plus: op_p,
        normal,
        normal_plus,
        plus_off_diagonal: plus_off,
        plus_witness_residual: plus_res,
        lifted_witness_residual: lifted_res,
        lifted_plus_defect: lifted_defect,
        failures,
    })
}
