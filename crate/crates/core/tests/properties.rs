use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use qwvnb::qop::{classify, commutator_norm, QMatrix};
use qwvnb::quat::standard_rep;
use qwvnb::sample;
use qwvnb::slice::{extend, find_J, restrict, transfer_checks};
use qwvnb::spectrum::{circularize, sphere_membership, spherical_spectrum, spherical_spectrum_with};
use qwvnb::wvnb::{decompose_op_norm, verify, Decomposition, Mode};
use qwvnb::{Quaternion, SlicePoint, UnitImaginary};

fn normal(n: usize, seed: u64) -> (QMatrix, UnitImaginary) {
    let mut rng = StdRng::seed_from_u64(seed);
    let axis = sample::random_unit_imaginary(&mut rng);
    (sample::random_normal(n, &mut rng), axis)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn slice_correspondence(n in 1usize..9, seed in any::<u64>()) {
        let (t, axis) = normal(n, seed);
        let s = find_J(&t, axis).unwrap();
        prop_assert!(commutator_norm(s.j(), &t) < 1e-8);
        let tp = restrict(&t, &s).unwrap();
        prop_assert!(extend(&tp, &s).unwrap().sub(&t).frobenius() < 1e-9);
        let rep = transfer_checks(&t, &s).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.failures);
    }

    #[test]
    fn spectrum_is_axially_symmetric(n in 1usize..7, seed in any::<u64>(), s in prop::array::uniform4(-1.0f64..1.0)) {
        let (t, _) = normal(n, seed);
        let report = spherical_spectrum(&t).unwrap();
        prop_assert_eq!(report.total_multiplicity(), n);
        let omega = circularize(&report.representatives());
        let s = Quaternion::new(s[0], s[1], s[2], s[3]);
        prop_assume!(s.modulus() > 1e-3);
        for p in report.representatives() {
            let q = s.inverse().unwrap() * p.to_quaternion() * s;
            prop_assert!(sphere_membership(q, &omega));
        }
        let adj = spherical_spectrum(&t.adjoint()).unwrap();
        prop_assert_eq!(adj.spheres.len(), report.spheres.len());
        for (a, b) in adj.spheres.iter().zip(&report.spheres) {
            prop_assert!((a.alpha - b.alpha).abs() < 1e-9 && (a.beta - b.beta).abs() < 1e-9);
        }
    }

    #[test]
    fn diagonal_spectra_are_standard_representatives(d in prop::collection::vec(prop::array::uniform4(-2.0f64..2.0), 1..6)) {
        let d: Vec<Quaternion> = d.into_iter().map(Quaternion::from).collect();
        let axis = UnitImaginary::from_axis(0.0, 1.0, 1.0).unwrap();
        let report = spherical_spectrum_with(&QMatrix::from_diag(&d), axis, 1e-8).unwrap();
        for q in &d {
            let p: SlicePoint = standard_rep(*q, axis);
            prop_assert!(report.spheres.iter().any(|s| (s.alpha - p.alpha).abs() < 1e-10 && (s.beta - p.beta).abs() < 1e-10));
        }
    }

    #[test]
    fn op_mode_invariants(n in 1usize..10, seed in any::<u64>(), e in 1e-3f64..0.5) {
        let (t, axis) = normal(n, seed);
        let dec = decompose_op_norm(&t, e, axis).unwrap();
        prop_assert!(dec.norms.op < e);
        let audit = verify(&t, &dec, Mode::Op);
        prop_assert!(audit.passed, "{:?}", audit.failures());
        prop_assert!(classify(&QMatrix::from_diag(&dec.d)).unwrap().normal);
        let finer = decompose_op_norm(&t, e / 2.0, axis).unwrap();
        prop_assert!(finer.norms.op <= dec.norms.op * (1.0 + 1e-12) + 1e-15);
        let back = Decomposition::from_json(&dec.to_json()).unwrap();
        prop_assert_eq!(back, dec);
    }

    #[test]
    fn matrix_json_is_bit_exact(n in 0usize..5, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let t = sample::random_matrix(n, &mut rng).scale(1e3);
        let s = t.to_json();
        let back = QMatrix::from_json(&s).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(back.to_json(), s);
    }
}
