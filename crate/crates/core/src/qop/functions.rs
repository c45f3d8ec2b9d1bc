use super::{embed, op_norm, unembed_projected, QMatrix};
use crate::error::{Error, Result};
use crate::linalg;
use crate::quat::{Quaternion, SliceFrame};

/// `Δ_q(T) = T² − T(q + conj q) + |q|² I`.
///
/// `q + conj q = 2 Re q` is real, so the side it multiplies from is irrelevant.
pub fn delta_q(t: &QMatrix, q: Quaternion) -> QMatrix {
    let n = t.n();
    let mut d = t.matmul(t).sub(&t.scale(2.0 * q.re()));
    let m2 = q.norm_sqr();
    for i in 0..n {
        d[(i, i)] += Quaternion::real(m2);
    }
    d
}

/// `f(H)` for a Hermitian quaternionic matrix `H`, through its complex embedding.
fn hermitian_function(h: &QMatrix, f: impl Fn(f64) -> f64) -> Result<QMatrix> {
    let frame = SliceFrame::default();
    let fm = linalg::hermitian_function(embed(h).as_cmatrix(), f)?;
    unembed_projected(&fm, &frame)
}

/// `Z_T = T (I + T*T)^{-1/2}`.
pub fn z_transform(t: &QMatrix) -> Result<QMatrix> {
    let h = QMatrix::identity(t.n()).add(&t.adjoint().matmul(t));
    let root = hermitian_function(&h, |x| 1.0 / x.sqrt())?;
    Ok(t.matmul(&root))
}

/// `T = Z (I − Z*Z)^{-1/2}`; requires `‖Z‖ < 1`.
pub fn z_inverse(z: &QMatrix) -> Result<QMatrix> {
    let norm = op_norm(z)?;
    if norm >= 1.0 {
        return Err(Error::Domain(format!(
            "z_inverse needs a strict contraction, got ‖Z‖ = {norm}"
        )));
    }
    let h = QMatrix::identity(z.n()).sub(&z.adjoint().matmul(z));
    let root = hermitian_function(&h, |x| 1.0 / x.sqrt())?;
    Ok(z.matmul(&root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qop::classify;
    use crate::quat::similar;
    use crate::sample;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn delta_examples() {
        let t = QMatrix::from_diag(&[Quaternion::I]);
        assert_eq!(delta_q(&t, Quaternion::I), QMatrix::zeros(1));
        assert_eq!(delta_q(&t, Quaternion::I * 2.0), QMatrix::from_diag(&[Quaternion::real(3.0)]));
    }

    #[test]
    fn delta_is_constant_on_similarity_classes() {
        let mut rng = StdRng::seed_from_u64(12);
        let t = sample::random_matrix(4, &mut rng);
        for _ in 0..20 {
            let q = sample::random_quaternion(&mut rng);
            let s = sample::random_quaternion(&mut rng);
            let q2 = s.inverse().unwrap() * q * s;
            assert!(similar(q, q2));
            assert!(delta_q(&t, q).sub(&delta_q(&t, q2)).frobenius() < 1e-11);
        }
        let n = sample::random_normal(4, &mut rng);
        let d = delta_q(&n, sample::random_quaternion(&mut rng));
        assert!(classify(&d).unwrap().normal);
    }

    #[test]
    fn z_transform_examples() {
        assert_eq!(z_transform(&QMatrix::zeros(3)).unwrap(), QMatrix::zeros(3));
        let z = z_transform(&QMatrix::identity(1)).unwrap();
        assert!((z[(0, 0)].w - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!(z[(0, 0)].im_modulus() < 1e-15);
    }

    #[test]
    fn z_transform_round_trip_on_normal_operators() {
        let mut rng = StdRng::seed_from_u64(13);
        for n in [1, 3, 8] {
            let scale = rng.gen_range(0.5..4.0);
            let t = sample::random_normal(n, &mut rng).scale(scale);
            let z = z_transform(&t).unwrap();
            assert!(op_norm(&z).unwrap() < 1.0);
            assert!(classify(&z).unwrap().normal);
            let back = z_inverse(&z).unwrap();
            assert!(back.sub(&t).frobenius() < 1e-8);
        }
        let nil = QMatrix::from_fn(2, |r, c| if r == 0 && c == 1 { Quaternion::ONE } else { Quaternion::ZERO });
        assert!(!classify(&z_transform(&nil).unwrap()).unwrap().normal);
    }

    #[test]
    fn z_inverse_rejects_non_contractions() {
        assert!(matches!(z_inverse(&QMatrix::identity(2)), Err(Error::Domain(_))));
    }
}
