//! Values computed once with numpy from the complex adjoint and frozen here.

use qwvnb::qop::{hs_norm, op_norm};
use qwvnb::spectrum::spherical_spectrum;
use qwvnb::QMatrix;

const T: &str = r#"{"n":3,"entries":[
 [[1,0.5,0,0],[0,0,1,0],[0.25,0,0,-0.5]],
 [[0,-1,0,0.5],[2,0,0,0],[0,0.3,0.2,0.1]],
 [[0.5,0,0,0],[-1,0,0,1],[0,0,-1,0]]]}"#;

// (alpha, beta) of each eigensphere, sorted by alpha
const SPHERES: [(f64, f64); 3] = [
    (-0.22327978996003536, 0.8666627635872762),
    (1.0077896492020426, 0.9422127082716688),
    (2.21549014075799, 0.7314514830266446),
];
const OP_NORM: f64 = 2.8931185254873086;
const HS_NORM: f64 = 3.3470135942359125;

#[test]
fn non_normal_spectrum_matches_reference() {
    let t = QMatrix::from_json(T).unwrap();
    let report = spherical_spectrum(&t).unwrap();
    let mut got: Vec<(f64, f64, usize)> = report.spheres.iter().map(|s| (s.alpha, s.beta, s.mult)).collect();
    got.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert_eq!(got.len(), SPHERES.len());
    for ((a, b, m), (ea, eb)) in got.into_iter().zip(SPHERES) {
        assert_eq!(m, 1);
        assert!((a - ea).abs() < 1e-10 && (b - eb).abs() < 1e-10, "({a}, {b}) vs ({ea}, {eb})");
    }
}

#[test]
fn norms_match_reference() {
    let t = QMatrix::from_json(T).unwrap();
    assert!((op_norm(&t).unwrap() - OP_NORM).abs() < 1e-12);
    assert!((hs_norm(&t) - HS_NORM).abs() < 1e-13);
}
