//! Dense complex matrices and the spectral kernels everything else routes through.
//!
//! The Schur decomposition is the classic pipeline: Householder reduction to
//! upper Hessenberg form followed by single-shift QR sweeps (Wilkinson shift,
//! Givens rotations, exceptional shifts on stagnation) with the unitary factor
//! accumulated. For a normal input the triangular factor is diagonal up to
//! rounding, so the Schur vectors double as an orthonormal eigenbasis.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        let width = rhs.cols;
        par::for_each_row(&mut out.data, width, |i, row| {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b = &rhs.data[k * width..(k + 1) * width];
                for (o, &bv) in row.iter_mut().zip(b) {
                    *o += a * bv;
                }
            }
        });
        out
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if r != c {
                    s += self[(r, c)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// `‖AA* − A*A‖_F`.
    pub fn normality_residual(&self) -> f64 {
        let a_h = self.adjoint();
        self.matmul(&a_h).sub(&a_h.matmul(self)).frobenius()
    }

    fn is_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}

/// `A = Q T Q*` with `Q` unitary and `T` upper triangular.
#[derive(Clone, Debug)]
pub struct Schur {
    pub q: CMatrix,
    pub t: CMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.t.diag()
    }

    /// `‖A q_k − λ_k q_k‖` for each Schur vector, read off the triangular factor.
    pub fn column_residuals(&self) -> Vec<f64> {
        let n = self.t.rows();
        (0..n)
            .map(|k| (0..k).map(|r| self.t[(r, k)].norm_sqr()).sum::<f64>().sqrt())
            .collect()
    }
}

fn hessenberg(a: &mut CMatrix, q: &mut CMatrix) {
    let n = a.rows;
    let mut v = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let alpha_norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * alpha_norm;
        for i in 0..n {
            v[i] = if i <= k { ZERO } else { a[(i, k)] };
        }
        v[k + 1] -= alpha;
        let vn = v[k + 1..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for c in v[k + 1..].iter_mut() {
            *c /= vn;
        }
        // A <- (I - 2vv*) A
        for col in k..n {
            let mut s = ZERO;
            for i in k + 1..n {
                s += v[i].conj() * a[(i, col)];
            }
            let s2 = s * 2.0;
            for i in k + 1..n {
                let d = v[i] * s2;
                a[(i, col)] -= d;
            }
        }
        // A <- A (I - 2vv*), Q <- Q (I - 2vv*)
        for m in [&mut *a, &mut *q] {
            let cols = m.cols;
            let vs = &v;
            par::for_each_row(&mut m.data, cols, |_, row| {
                let mut s = ZERO;
                for j in k + 1..cols {
                    s += row[j] * vs[j];
                }
                let s2 = s * 2.0;
                for j in k + 1..cols {
                    row[j] -= s2 * vs[j].conj();
                }
            });
        }
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G [a; b] = [r; 0]`, `c` real.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

/// Complex Schur decomposition of a square matrix.
pub fn schur(a: &CMatrix) -> Result<Schur> {
    a.is_square()?;
    let n = a.rows;
    let mut t = a.clone();
    let mut q = CMatrix::identity(n);
    if n == 0 {
        return Ok(Schur { q, t });
    }
    if !t.data.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::Numerical("non-finite matrix entry".into()));
    }
    hessenberg(&mut t, &mut q);

    let eps = f64::EPSILON;
    let norm = t.max_abs().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let max_total = 100 * n.max(10);
    let mut rot: Vec<(f64, Complex64)> = Vec::with_capacity(n);

    while hi > 0 {
        // locate the active unreduced block [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            let s = t[(lo - 1, lo - 1)].norm() + t[(lo, lo)].norm();
            let s = if s == 0.0 { norm } else { s };
            if t[(lo, lo - 1)].norm() <= eps * s {
                t[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_total {
            return Err(Error::Numerical(format!(
                "Schur iteration did not converge (n = {n})"
            )));
        }

        let shift = if iter.is_multiple_of(11) {
            // exceptional shift breaks cycles
            t[(hi, hi)] + Complex64::new(t[(hi, hi - 1)].norm() * 0.75, 0.0)
        } else {
            let a11 = t[(hi - 1, hi - 1)];
            let a12 = t[(hi - 1, hi)];
            let a21 = t[(hi, hi - 1)];
            let a22 = t[(hi, hi)];
            let half = (a11 - a22) * 0.5;
            let disc = (half * half + a12 * a21).sqrt();
            let mu1 = a22 - a12 * a21 / (half + disc);
            let mu2 = a22 - a12 * a21 / (half - disc);
            let pick = |m: Complex64| if m.re.is_finite() && m.im.is_finite() { Some(m) } else { None };
            match (pick(mu1), pick(mu2)) {
                (Some(x), Some(y)) => {
                    if (x - a22).norm() <= (y - a22).norm() {
                        x
                    } else {
                        y
                    }
                }
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => a22,
            }
        };

        // explicit-shift QR step on the block: H - μI = QR, H <- RQ + μI
        for k in lo..=hi {
            t[(k, k)] -= shift;
        }
        rot.clear();
        for k in lo..hi {
            let (c, s) = givens(t[(k, k)], t[(k + 1, k)]);
            rot.push((c, s));
            for col in k..n {
                let x = t[(k, col)];
                let y = t[(k + 1, col)];
                t[(k, col)] = x * c + s * y;
                t[(k + 1, col)] = -s.conj() * x + y * c;
            }
            t[(k + 1, k)] = ZERO;
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = lo + idx;
            let last = (k + 2).min(hi);
            // columns k, k+1 multiplied by G*
            for r in 0..=last {
                let x = t[(r, k)];
                let y = t[(r, k + 1)];
                t[(r, k)] = x * c + y * s.conj();
                t[(r, k + 1)] = -x * s + y * c;
            }
            for r in 0..n {
                let x = q[(r, k)];
                let y = q[(r, k + 1)];
                q[(r, k)] = x * c + y * s.conj();
                q[(r, k + 1)] = -x * s + y * c;
            }
        }
        for k in lo..=hi {
            t[(k, k)] += shift;
        }
    }
    for r in 1..n {
        for c in 0..r {
            t[(r, c)] = ZERO;
        }
    }
    Ok(Schur { q, t })
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    a.is_square()?;
    let n = a.rows;
    let sym = CMatrix::from_fn(n, n, |r, c| (a[(r, c)] + a[(c, r)].conj()) * 0.5);
    let s = schur(&sym)?;
    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<f64> = s.t.diag().iter().map(|c| c.re).collect();
    order.sort_by(|&x, &y| vals[x].total_cmp(&vals[y]));
    let sorted: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let vecs = CMatrix::from_fn(n, n, |r, c| s.q[(r, order[c])]);
    Ok((sorted, vecs))
}

/// `f(A)` for Hermitian `A` via its eigen-decomposition.
pub fn hermitian_function(a: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (vals, v) = hermitian_eigen(a)?;
    let fd: Vec<Complex64> = vals.iter().map(|&x| Complex64::new(f(x), 0.0)).collect();
    let scaled = CMatrix::from_fn(v.rows, v.cols, |r, c| v[(r, c)] * fd[c]);
    Ok(scaled.matmul(&v.adjoint()))
}

/// Largest singular value, via the top eigenvalue of `A*A`.
pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    if a.rows == 0 || a.cols == 0 {
        return Ok(0.0);
    }
    let g = a.adjoint().matmul(a);
    let (vals, _) = hermitian_eigen(&g)?;
    Ok(vals.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// All singular values (descending) by one-sided Jacobi on the rows.
///
/// Small singular values come out with absolute error near `eps·‖A‖`, which is
/// what the scale-aware singularity test needs.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let (m, n) = (a.rows, a.cols);
    // rows of `w` are the columns of A
    let mut w = a.adjoint();
    let tol = f64::EPSILON * (m.max(n) as f64).sqrt();
    let mut converged = false;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (rp, rq) = (p * m, q * m);
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for i in 0..m {
                    let x = w.data[rp + i];
                    let y = w.data[rq + i];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let x = w.data[rp + i];
                    let y = w.data[rq + i] * phase.conj();
                    w.data[rp + i] = x * c - y * s;
                    w.data[rq + i] = x * s + y * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical("Jacobi SVD did not converge".into()));
    }
    let mut sv: Vec<f64> = (0..n)
        .map(|p| w.data[p * m..(p + 1) * m].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv.truncate(m.min(n));
    Ok(sv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random(n: usize, rng: &mut StdRng) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn unitary(n: usize, rng: &mut StdRng) -> CMatrix {
        let a = random(n, rng);
        let h = a.add(&a.adjoint());
        hermitian_eigen(&h).unwrap().1
    }

    fn check_schur(a: &CMatrix) -> Schur {
        let s = schur(a).unwrap();
        let n = a.rows();
        let qh = s.q.adjoint();
        assert!(qh.matmul(&s.q).sub(&CMatrix::identity(n)).frobenius() < 1e-12 * n as f64);
        let rec = s.q.matmul(&s.t).matmul(&qh);
        assert!(rec.sub(a).frobenius() < 1e-12 * (1.0 + a.frobenius()) * n as f64);
        for r in 1..n {
            for c in 0..r {
                assert_eq!(s.t[(r, c)], ZERO);
            }
        }
        s
    }

    #[test]
    fn schur_of_random_matrices() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in [1, 2, 3, 5, 17, 40] {
            check_schur(&random(n, &mut rng));
        }
    }

    #[test]
    fn schur_of_normal_matrix_is_diagonal() {
        let mut rng = StdRng::seed_from_u64(11);
        let n = 24;
        let u = unitary(n, &mut rng);
        let mut d: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        // repeated eigenvalues and conjugate pairs
        d[3] = d[2];
        d[5] = d[4].conj();
        d[7] = d[2];
        let a = u.matmul(&CMatrix::from_diag(&d)).matmul(&u.adjoint());
        let s = check_schur(&a);
        assert!(s.t.off_diagonal_norm() < 1e-12 * a.frobenius());
        let mut got = s.eigenvalues();
        let key = |c: &Complex64| (c.re, c.im);
        got.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        d.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        for (g, e) in got.iter().zip(&d) {
            assert!((g - e).norm() < 1e-12);
        }
    }

    #[test]
    fn schur_handles_rotation_and_zero() {
        let r = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => ONE,
            (1, 0) => -ONE,
            _ => ZERO,
        });
        let s = check_schur(&r);
        let mut ev: Vec<f64> = s.eigenvalues().iter().map(|c| c.im).collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
        check_schur(&CMatrix::zeros(4, 4));
        check_schur(&CMatrix::identity(6));
    }

    #[test]
    fn schur_of_jordan_block_converges() {
        let j = CMatrix::from_fn(5, 5, |r, c| if c == r + 1 { ONE } else { ZERO });
        check_schur(&j);
    }

    #[test]
    fn singular_values_match_hermitian_route() {
        let mut rng = StdRng::seed_from_u64(3);
        for n in [1, 2, 6, 19] {
            let a = random(n, &mut rng);
            let sv = singular_values(&a).unwrap();
            let (ev, _) = hermitian_eigen(&a.adjoint().matmul(&a)).unwrap();
            let mut via: Vec<f64> = ev.iter().map(|x| x.max(0.0).sqrt()).collect();
            via.reverse();
            for (x, y) in sv.iter().zip(&via) {
                assert!((x - y).abs() < 1e-10, "{x} vs {y}");
            }
            assert!((spectral_norm(&a).unwrap() - sv[0]).abs() < 1e-12 * sv[0]);
        }
    }

    #[test]
    fn tiny_singular_value_is_resolved() {
        let mut rng = StdRng::seed_from_u64(5);
        let n = 8;
        let u = unitary(n, &mut rng);
        let v = unitary(n, &mut rng);
        let mut d: Vec<Complex64> = (1..=n).map(|k| Complex64::new(k as f64, 0.0)).collect();
        d[0] = Complex64::new(1e-13, 0.0);
        let a = u.matmul(&CMatrix::from_diag(&d)).matmul(&v);
        let sv = singular_values(&a).unwrap();
        assert!(sv[n - 1] < 1e-12, "{}", sv[n - 1]);
    }

    #[test]
    fn hermitian_function_inverse_sqrt() {
        let mut rng = StdRng::seed_from_u64(9);
        let a = random(7, &mut rng);
        let h = CMatrix::identity(7).add(&a.adjoint().matmul(&a));
        let r = hermitian_function(&h, |x| x.powf(-0.5)).unwrap();
        let back = r.matmul(&r).matmul(&h);
        assert!(back.sub(&CMatrix::identity(7)).frobenius() < 1e-12);
    }
}
