use serde::Serialize;

use super::decompose::{Decomposition, Mode};
use super::net::NetSpec;
use crate::qop::{hs_norm, op_norm, QMatrix};
use crate::tol;

/// One audited invariant.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn check(name: &'static str, value: f64, bound: f64, strict: bool) -> Check {
    let passed = value.is_finite() && if strict { value < bound } else { value <= bound };
    Check {
        name,
        passed,
        value,
        bound,
        detail: None,
    }
}

/// Re-derives every invariant of `dec` against `n` without trusting its stored numbers.
pub fn verify(n: &QMatrix, dec: &Decomposition, mode: Mode) -> VerifyReport {
    let mut checks = Vec::new();
    let dim = n.n();
    if dec.u.n() != dim || dec.k.n() != dim || dec.d.len() != dim || dec.net.points.len() != dim {
        checks.push(Check {
            name: "shape",
            passed: false,
            value: f64::NAN,
            bound: f64::NAN,
            detail: Some(format!(
                "N is {dim}x{dim}, U {}x{0}, K {}x{1}, |d| = {}, |net| = {}",
                dec.u.n(),
                dec.k.n(),
                dec.d.len(),
                dec.net.points.len()
            )),
        });
        return VerifyReport { passed: false, checks };
    }
    let mut mode_check = check("mode", 0.0, 0.0, false);
    if dec.mode != mode {
        mode_check.passed = false;
        mode_check.detail = Some(format!("decomposition is {:?}, audit requested {:?}", dec.mode, mode));
    }
    checks.push(mode_check);

    let norm_n = op_norm(n).unwrap_or(f64::NAN);
    let scale = 1f64.max(norm_n);

    let id = QMatrix::identity(dim);
    checks.push(check("unitarity", dec.u.adjoint().matmul(&dec.u).sub(&id).frobenius(), 1e-9, false));

    let recon = n.sub(&dec.diagonal_part()).sub(&dec.k).frobenius();
    checks.push(check("reconstruction", recon, 1e-9 * scale, false));

    let op_k = op_norm(&dec.k).unwrap_or(f64::NAN);
    let hs_k = hs_norm(&dec.k);
    match mode {
        Mode::Op => checks.push(check("op_norm_bound", op_k, dec.epsilon, true)),
        Mode::Hs => checks.push(check("hs_norm_bound", hs_k, dec.epsilon, true)),
    }
    let drift = (op_k - dec.norms.op).abs().max((hs_k - dec.norms.hs).abs());
    checks.push(check("recorded_norms", drift, tol::SLICE * 1f64.max(op_k).max(hs_k), false));

    let m = dec.u.adjoint().matmul(&n.sub(&dec.k)).matmul(&dec.u);
    checks.push(check("diagonality", m.off_diagonal_norm(), tol::COMMUTE * scale, true));
    let diag_err = m
        .diag()
        .iter()
        .zip(&dec.d)
        .map(|(a, b)| (*a - *b).modulus())
        .fold(0.0, f64::max);
    checks.push(check("diagonal_entries", diag_err, tol::COMMUTE * scale, true));

    let axis = dec.axis.as_quaternion();
    let slice_err = dec
        .d
        .iter()
        .map(|q| {
            let along = q.im_dot(axis);
            let perp = (q.im() - axis * along).modulus();
            perp + (-along).max(0.0)
        })
        .fold(0.0, f64::max);
    checks.push(check("upper_half_slice", slice_err, tol::SLICE, false));

    checks.push(net_check(dec));

    VerifyReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

/// Every `d_r` must be bit-for-bit reproducible (to `1e-12`) from its declared net point.
fn net_check(dec: &Decomposition) -> Check {
    let spec = &dec.net.spec;
    let mut c = check("net_membership", 0.0, tol::SCALAR, false);
    if spec.epsilon() != dec.epsilon || spec.check().is_err() {
        c.passed = false;
        c.detail = Some("net does not belong to the declared epsilon".into());
        return c;
    }
    let axis = dec.axis.as_quaternion();
    let mut worst: f64 = 0.0;
    for (r, (p, q)) in dec.net.points.iter().zip(&dec.d).enumerate() {
        if dec.mode == Mode::Op && (p.level != 0 || !matches!(spec, NetSpec::Grid { .. })) {
            c.passed = false;
            c.detail = Some(format!("entry {r} is not on the level-0 grid"));
            return c;
        }
        let Some(v) = spec.value(*p) else {
            c.passed = false;
            c.detail = Some(format!("entry {r} names a point outside the net"));
            return c;
        };
        let expected = crate::quat::Quaternion::real(v[0]) + axis * v[1];
        worst = worst.max((expected - *q).modulus() / 1f64.max(q.modulus()));
    }
    c.value = worst;
    c.passed = worst <= tol::SCALAR;
    c
}
