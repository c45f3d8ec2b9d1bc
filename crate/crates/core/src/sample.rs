//! Random test operators: quaternions, unitaries and normal matrices.

use rand::Rng;

use crate::qop::QMatrix;
use crate::qspace::{gram_schmidt, QVector};
use crate::quat::{Quaternion, UnitImaginary};

/// Components uniform in `[-1, 1)`.
pub fn random_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

pub fn random_unit_imaginary<R: Rng + ?Sized>(rng: &mut R) -> UnitImaginary {
    loop {
        let (x, y, z) = (
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let r2: f64 = x * x + y * y + z * z;
        if r2 > 1e-4 && r2 <= 1.0 {
            return UnitImaginary::from_axis(x, y, z).expect("nonzero axis");
        }
    }
}

pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QVector {
    QVector((0..n).map(|_| random_quaternion(rng)).collect())
}

pub fn random_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QMatrix {
    QMatrix::from_fn(n, |_, _| random_quaternion(rng))
}

/// Quaternionic unitary from Gram–Schmidt on random columns.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QMatrix {
    loop {
        let cols: Vec<QVector> = (0..n).map(|_| random_vector(n, rng)).collect();
        if let Ok(b) = gram_schmidt(&cols) {
            return QMatrix::from_columns(b.vectors()).expect("square");
        }
    }
}

/// `U diag(d) U*` for a random unitary `U`.
pub fn normal_with_spectrum<R: Rng + ?Sized>(d: &[Quaternion], rng: &mut R) -> QMatrix {
    let u = random_unitary(d.len(), rng);
    u.mul_diag_right(d).matmul(&u.adjoint())
}

/// Random normal matrix with quaternionic diagonal entries in the unit box.
pub fn random_normal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QMatrix {
    let d: Vec<Quaternion> = (0..n).map(|_| random_quaternion(rng)).collect();
    normal_with_spectrum(&d, rng)
}
