//! Real quaternions, unit imaginary axes and slice planes.
//!
//! A slice plane `C_m = {α + mβ}` is a commutative copy of the complex numbers
//! inside H for every unit imaginary `m`. [`SliceFrame`] extends `m` to a right
//! handed frame `(m, n1, n2)` so that every quaternion splits uniquely as
//! `a + b·n1` with `a, b ∈ C_m`; that split is what the complex embedding of
//! quaternionic matrices is built on.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// `w + x i + y j + z k`. Serialized as the 4-array `[w, x, y, z]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// `|q|`.
    pub fn modulus(self) -> f64 {
        self.w.hypot(self.x).hypot(self.y.hypot(self.z))
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::Domain(format!("quaternion {self} has no inverse")));
        }
        Ok(self.conj() * (1.0 / n2))
    }

    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part as a pure quaternion.
    pub fn im(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    /// `|Im q|`.
    pub fn im_modulus(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    /// Euclidean dot product of the imaginary parts.
    pub fn im_dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Componentwise closeness, `tol` scaled by `max(1, |self|, |other|)`.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        let scale = 1f64.max(self.modulus()).max(other.modulus());
        (self - other).modulus() <= tol * scale
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Self {
        self.scale(1.0 / s)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Self {
        iter.fold(Quaternion::ZERO, |a, b| a + b)
    }
}

/// A point of the unit sphere `S` of imaginary quaternions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitImaginary(Quaternion);

impl Default for UnitImaginary {
    fn default() -> Self {
        Self::I
    }
}

impl TryFrom<[f64; 3]> for UnitImaginary {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        UnitImaginary::from_axis(a[0], a[1], a[2])
    }
}

impl From<UnitImaginary> for [f64; 3] {
    fn from(m: UnitImaginary) -> Self {
        m.components()
    }
}

impl UnitImaginary {
    pub const I: UnitImaginary = UnitImaginary(Quaternion::I);
    pub const J: UnitImaginary = UnitImaginary(Quaternion::J);
    pub const K: UnitImaginary = UnitImaginary(Quaternion::K);

    /// Normalizes `(x, y, z)`; rejects vectors shorter than `1e-6`.
    ///
    /// Vectors already of unit length up to rounding are kept bit-for-bit, so a
    /// serialized axis reads back unchanged.
    pub fn from_axis(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = x.hypot(y).hypot(z);
        if !(n.is_finite() && n >= 1e-6) {
            return Err(Error::Domain(format!(
                "axis ({x}, {y}, {z}) is too short to normalize"
            )));
        }
        if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(Self(Quaternion::new(0.0, x, y, z)));
        }
        Ok(Self(Quaternion::new(0.0, x / n, y / n, z / n)))
    }

    /// Accepts `q` only if it already is a unit imaginary quaternion.
    pub fn try_from_quaternion(q: Quaternion) -> Result<Self> {
        if q.w.abs() > tol::SCALAR || (q.modulus() - 1.0).abs() > tol::SCALAR {
            return Err(Error::Domain(format!("{q} is not a unit imaginary quaternion")));
        }
        Ok(Self(Quaternion::new(0.0, q.x, q.y, q.z)))
    }

    pub fn as_quaternion(self) -> Quaternion {
        self.0
    }

    pub fn components(self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        self.0.approx_eq(other.0, tol)
    }
}

/// `α + mβ ∈ C_m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlicePoint {
    pub alpha: f64,
    pub beta: f64,
    pub axis: UnitImaginary,
}

impl SlicePoint {
    pub fn new(alpha: f64, beta: f64, axis: UnitImaginary) -> Self {
        Self { alpha, beta, axis }
    }

    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::real(self.alpha) + self.axis.as_quaternion() * self.beta
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.alpha, self.beta)
    }

    pub fn from_complex(c: Complex64, axis: UnitImaginary) -> Self {
        Self::new(c.re, c.im, axis)
    }

    /// True when the point lies in the closed upper half plane `C_m^+`.
    pub fn is_upper(self) -> bool {
        self.beta >= 0.0
    }
}

/// `p ~ q` iff `p = s⁻¹qs` for some `s ≠ 0`, decided by equal real parts and moduli.
pub fn similar(p: Quaternion, q: Quaternion) -> bool {
    similar_with(p, q, tol::SCALAR)
}

pub fn similar_with(p: Quaternion, q: Quaternion, tol: f64) -> bool {
    let scale = 1f64.max(p.modulus()).max(q.modulus());
    (p.w - q.w).abs() <= tol * scale && (p.modulus() - q.modulus()).abs() <= tol * scale
}

/// The unique member of `[q] ∩ C_m^+`.
pub fn standard_rep(q: Quaternion, m: UnitImaginary) -> SlicePoint {
    SlicePoint::new(q.w, q.im_modulus(), m)
}

/// Right handed orthonormal frame `(m, n1, n2)` of Im(H) with `m·n1 = n2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceFrame {
    m: UnitImaginary,
    n1: Quaternion,
    n2: Quaternion,
}

impl Default for SliceFrame {
    fn default() -> Self {
        Self::new(UnitImaginary::I)
    }
}

impl SliceFrame {
    /// Deterministic completion of `m`; `m = i` gives `(i, j, k)`.
    pub fn new(m: UnitImaginary) -> Self {
        let mq = m.as_quaternion();
        let seed = if mq.y.abs() < 0.9 { Quaternion::J } else { Quaternion::K };
        let along = mq.im_dot(seed);
        let v = seed - mq * along;
        let n1 = v / v.modulus();
        // for orthogonal pure quaternions the product is the cross product
        let n2 = mq * n1;
        Self { m, n1, n2 }
    }

    pub fn axis(&self) -> UnitImaginary {
        self.m
    }

    /// Unit imaginary anticommuting with `m`.
    pub fn n1(&self) -> Quaternion {
        self.n1
    }

    pub fn n2(&self) -> Quaternion {
        self.n2
    }

    /// `q = a + b·n1` with `a, b ∈ C_m` written as complex numbers.
    pub fn split(&self, q: Quaternion) -> (Complex64, Complex64) {
        let m = self.m.as_quaternion();
        (
            Complex64::new(q.w, q.im_dot(m)),
            Complex64::new(q.im_dot(self.n1), q.im_dot(self.n2)),
        )
    }

    pub fn join(&self, a: Complex64, b: Complex64) -> Quaternion {
        let m = self.m.as_quaternion();
        Quaternion::real(a.re) + m * a.im + self.n1 * b.re + self.n2 * b.im
    }

    /// Embeds `α + iβ` as `α + mβ`.
    pub fn from_complex(&self, c: Complex64) -> Quaternion {
        Quaternion::real(c.re) + self.m.as_quaternion() * c.im
    }

    /// Component of `q` in `C_m`, dropping everything orthogonal to `span{1, m}`.
    pub fn to_complex(&self, q: Quaternion) -> Complex64 {
        self.split(q).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn units() -> [Quaternion; 4] {
        [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K]
    }

    /// Product of basis units from the defining relations i² = j² = k² = ijk = -1.
    fn unit_table(a: usize, b: usize) -> (f64, usize) {
        const T: [[(f64, usize); 4]; 4] = [
            [(1.0, 0), (1.0, 1), (1.0, 2), (1.0, 3)],
            [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
            [(1.0, 2), (-1.0, 3), (-1.0, 0), (1.0, 1)],
            [(1.0, 3), (1.0, 2), (-1.0, 1), (-1.0, 0)],
        ];
        T[a][b]
    }

    fn table_mul(p: Quaternion, q: Quaternion) -> Quaternion {
        let pc: [f64; 4] = p.into();
        let qc: [f64; 4] = q.into();
        let mut out = [0.0; 4];
        for a in 0..4 {
            for b in 0..4 {
                let (s, c) = unit_table(a, b);
                out[c] += s * pc[a] * qc[b];
            }
        }
        out.into()
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-10.0f64..10.0).prop_map(Quaternion::from)
    }

    fn axis() -> impl Strategy<Value = UnitImaginary> {
        prop::array::uniform3(-1.0f64..1.0)
            .prop_filter("nonzero", |a| a[0].hypot(a[1]).hypot(a[2]) > 1e-3)
            .prop_map(|a| UnitImaginary::from_axis(a[0], a[1], a[2]).unwrap())
    }

    #[test]
    fn unit_products() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::I, Quaternion::J);
        assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
        assert_eq!(
            Quaternion::I * Quaternion::J * Quaternion::K,
            Quaternion::real(-1.0)
        );
        for (a, u) in units().iter().enumerate() {
            for (b, v) in units().iter().enumerate() {
                let (s, c) = unit_table(a, b);
                assert_eq!(*u * *v, units()[c] * s);
            }
        }
    }

    #[test]
    fn one_plus_i_times_one_plus_j() {
        let p = Quaternion::ONE + Quaternion::I;
        let q = Quaternion::ONE + Quaternion::J;
        let expected = table_mul(p, q);
        assert_eq!(expected, Quaternion::new(1.0, 1.0, 1.0, 1.0));
        assert_eq!(p * q, expected);
    }

    #[test]
    fn conj_modulus_inverse() {
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(q.conj(), Quaternion::new(1.0, -2.0, -3.0, -4.0));
        assert_eq!(Quaternion::new(1.0, 1.0, 1.0, 1.0).modulus(), 2.0);
        let qq = q * q.conj();
        assert_eq!(qq, Quaternion::real(q.norm_sqr()));
        assert!((q * q.inverse().unwrap()).approx_eq(Quaternion::ONE, 1e-15));
        assert!(matches!(Quaternion::ZERO.inverse(), Err(Error::Domain(_))));
    }

    #[test]
    fn similarity_examples() {
        assert!(similar(Quaternion::I, Quaternion::J));
        assert!(similar(Quaternion::ONE + Quaternion::I, Quaternion::ONE + Quaternion::K));
        assert!(!similar(Quaternion::ONE, Quaternion::ONE + Quaternion::I));
    }

    #[test]
    fn standard_rep_examples() {
        let r = standard_rep(Quaternion::new(1.0, 0.0, 2.0, 0.0), UnitImaginary::I);
        assert_eq!((r.alpha, r.beta), (1.0, 2.0));
        assert_eq!(r.to_quaternion(), Quaternion::new(1.0, 2.0, 0.0, 0.0));
        let r = standard_rep(Quaternion::real(3.0), UnitImaginary::I);
        assert_eq!((r.alpha, r.beta), (3.0, 0.0));
    }

    #[test]
    fn axis_rejects_zero_and_serializes_as_triple() {
        assert!(UnitImaginary::from_axis(0.0, 0.0, 1e-9).is_err());
        let m = UnitImaginary::from_axis(0.0, 3.0, 4.0).unwrap();
        assert_eq!(serde_json::to_string(&m).unwrap(), "[0.0,0.6,0.8]");
        let q: Quaternion = serde_json::from_str("[1.0,2.0,3.0,4.0]").unwrap();
        assert_eq!(q, Quaternion::new(1.0, 2.0, 3.0, 4.0));
        assert!(serde_json::from_str::<Quaternion>("[1.0,2.0,3.0]").is_err());
        assert!(serde_json::from_str::<Quaternion>("[1.0,2.0,3.0,4.0,5.0]").is_err());
    }

    #[test]
    fn default_frame_is_ijk() {
        let f = SliceFrame::default();
        assert_eq!(f.n1(), Quaternion::J);
        assert_eq!(f.n2(), Quaternion::K);
    }

    proptest! {
        #[test]
        fn product_matches_table(p in quat(), q in quat()) {
            prop_assert!((p * q).approx_eq(table_mul(p, q), 1e-13));
        }

        #[test]
        fn multiplicative_modulus_and_conj(p in quat(), q in quat()) {
            let pq = p * q;
            prop_assert!(tol::close(pq.modulus(), p.modulus() * q.modulus(), 1e-12));
            prop_assert!(pq.conj().approx_eq(q.conj() * p.conj(), 1e-12 * (1.0 + p.modulus() * q.modulus())));
            prop_assert_eq!(p.conj().conj(), p);
        }

        #[test]
        fn similarity_is_an_equivalence(q in quat(), s in quat(), t in quat()) {
            prop_assume!(s.modulus() > 1e-3 && t.modulus() > 1e-3);
            let a = s.inverse().unwrap() * q * s;
            let b = t.inverse().unwrap() * a * t;
            prop_assert!(similar(q, q));
            prop_assert!(similar(q, a) && similar(a, q));
            prop_assert!(similar(a, b) && similar(q, b));
        }

        #[test]
        fn standard_rep_properties(q in quat(), m in axis()) {
            let r = standard_rep(q, m);
            prop_assert!(r.is_upper());
            prop_assert!(similar(r.to_quaternion(), q));
            let again = standard_rep(r.to_quaternion(), m);
            prop_assert!(tol::close(again.alpha, r.alpha, 1e-14) && tol::close(again.beta, r.beta, 1e-12));
        }

        #[test]
        fn slice_planes_meet_in_the_reals(m in axis(), n in axis(), a in -5.0f64..5.0, b in -5.0f64..5.0) {
            let mq = m.as_quaternion();
            let nq = n.as_quaternion();
            prop_assume!((mq - nq).modulus() > 1e-2 && (mq + nq).modulus() > 1e-2);
            let p = Quaternion::real(a) + mq * b;
            let leaves_cn = SliceFrame::new(n).split(p).1.norm();
            if leaves_cn <= 1e-12 * (1.0 + p.modulus()) {
                prop_assert!(b.abs() < 1e-9);
            }
            if b.abs() > 1e-3 {
                prop_assert!(leaves_cn > 1e-8);
            }
            prop_assert_eq!(SliceFrame::new(n).split(Quaternion::real(a)).1, Complex64::new(0.0, 0.0));
        }

        #[test]
        fn frame_split_round_trips(q in quat(), m in axis()) {
            let f = SliceFrame::new(m);
            let (a, b) = f.split(q);
            prop_assert!(f.join(a, b).approx_eq(q, 1e-13));
            prop_assert!((f.axis().as_quaternion() * f.n1()).approx_eq(f.n2(), 1e-14));
            let mm = m.as_quaternion() * m.as_quaternion();
            prop_assert!(mm.approx_eq(Quaternion::real(-1.0), 1e-12));
        }
    }
}
