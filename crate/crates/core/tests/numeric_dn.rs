use std::f64::consts::PI;

use dndet::dn_explicit::{annulus_eigenvalues, AnnulusGeometry, Geometry};
use dndet::numeric_dn::{
    boundary_length, build_dn_truncated, conformal_family, convergence_table, derivative_identity_check,
    expected_kernel, is_monotone, log_pseudo_det, multiplication_matrix, ConformalFactor, KERNEL_THRESHOLD,
};
use dndet::zeta_reg::{log_det, zeta_at_zero, EigenSequence};
use dndet::Error;
use nalgebra::DVector;
use proptest::prelude::*;

mod common;
use common::bessel_i;

const DISC: Geometry = Geometry::Disc { radius: 1.0 };

fn cos_factor(a: f64) -> ConformalFactor {
    ConformalFactor::new(0.0, vec![a], vec![]).unwrap()
}

#[test]
fn boundary_length_matches_bessel_series() {
    let omega = cos_factor(0.3);
    for radius in [0.5, 1.0, 3.0] {
        for t in [-2.0, -0.5, 0.0, 0.7, 1.0, 4.0] {
            let got = boundary_length(Geometry::Disc { radius }, &omega, t);
            let expect = 2.0 * PI * radius * bessel_i(0, 0.3 * t);
            assert!((got / expect - 1.0).abs() < 1e-12, "radius {radius} t {t}");
        }
    }
    let ann = boundary_length(Geometry::Annulus { rho: 2.0 }, &omega, 1.0);
    assert!((ann / (2.0 * PI * 3.0 * bessel_i(0, 0.3)) - 1.0).abs() < 1e-12);
}

#[test]
fn kernel_is_the_exponential_of_the_factor() {
    let omega = cos_factor(0.3);
    let k = 32;
    let op = build_dn_truncated(DISC, k).unwrap();
    for t in [-1.0, 0.25, 1.0] {
        // e^{x cos th} = I_0(x) + 2 sum I_n(x) cos(n th), x = 0.15 t
        let x = 0.15 * t;
        let mut v = DVector::zeros(2 * k + 1);
        v[0] = bessel_i(0, x) * (2.0 * PI).sqrt();
        for n in 1..=k {
            v[2 * n - 1] = 2.0 * bessel_i(n as u32, x) * PI.sqrt();
        }
        let v = v.normalize();
        let lib = expected_kernel(&op, &omega, t);
        assert!((&lib - &v).amax() < 1e-12, "t {t}");
        let nt = conformal_family(&op, &omega, t).unwrap();
        assert!((&nt.matrix * &v).norm() < 1e-10 * nt.matrix.norm(), "t {t}");
        assert_eq!(log_pseudo_det(&nt).unwrap().1, 1);
    }
}

#[test]
fn truncated_annulus_has_the_explicit_spectrum() {
    let geom = AnnulusGeometry::new(2.0).unwrap();
    let op = build_dn_truncated(Geometry::Annulus { rho: 2.0 }, 2).unwrap();
    let mut expect = vec![0.0, geom.mode0_eigenvalue()];
    for n in 1..=2 {
        let (p, m) = annulus_eigenvalues(&geom, n).unwrap();
        expect.extend([p, p, m, m]);
    }
    expect.sort_by(f64::total_cmp);
    let got = op.eigenvalues();
    assert_eq!(got.len(), expect.len());
    for (a, b) in got.iter().zip(&expect) {
        assert!((a - b).abs() < 1e-13 * (1.0 + b), "{a} vs {b}");
    }
    assert_eq!(op.symmetry_defect(), 0.0);
}

#[test]
fn constant_factor_scales_the_operator() {
    let c = 0.4;
    let omega = ConformalFactor::constant(c);
    let op = build_dn_truncated(DISC, 16).unwrap();
    for t in [-1.5, 0.3, 2.0] {
        let nt = conformal_family(&op, &omega, t).unwrap();
        let scaled = &op.matrix * (-t * c).exp();
        assert!((&nt.matrix - &scaled).amax() < 1e-14 * scaled.amax(), "t {t}");
        // the regularized determinant of n, n scales by e^{-t c zeta(0)} = e^{t c},
        // which is exactly the growth of the boundary length
        let seq = EigenSequence::pure(1.0, 1.0, 2).unwrap();
        let moved = log_det(&seq.scaled((-t * c).exp()).unwrap()).log_value;
        assert!((zeta_at_zero(&seq) + 1.0).abs() < 1e-15);
        let ratio_0 = log_det(&seq).log_value - boundary_length(DISC, &omega, 0.0).ln();
        let ratio_t = moved - boundary_length(DISC, &omega, t).ln();
        assert!((ratio_t - ratio_0).abs() < 1e-13, "t {t}");
    }
}

#[test]
fn derivative_identity_converges_on_the_disc() {
    let omega = cos_factor(0.3);
    let ts: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let rows = convergence_table(DISC, &omega, &[16, 32, 64], &ts).unwrap();
    assert!(rows[2].max_residual <= 1e-6, "{rows:?}");
    assert!(is_monotone(&rows, 1e-9), "{rows:?}");
}

#[test]
fn derivative_identity_on_the_annulus() {
    let omega = ConformalFactor::new(0.0, vec![0.2], vec![0.1]).unwrap();
    let check = derivative_identity_check(Geometry::Annulus { rho: 2.0 }, &omega, 32, &[-0.5, 0.0, 0.5]).unwrap();
    assert!(check.max_residual <= 1e-6, "{check:?}");
}

#[test]
fn coarse_truncations_are_refused() {
    let omega = ConformalFactor::new(0.0, vec![0.0, 0.3], vec![]).unwrap();
    assert!(matches!(derivative_identity_check(DISC, &omega, 6, &[0.1]), Err(Error::Truncation(_))));
    let op = build_dn_truncated(DISC, 1).unwrap();
    assert!(matches!(conformal_family(&op, &omega, 0.5), Err(Error::Truncation(_))));
    let shifted = ConformalFactor::new(0.1, vec![0.3], vec![]).unwrap();
    assert!(matches!(derivative_identity_check(DISC, &shifted, 16, &[0.1]), Err(Error::InvalidInput(_))));
}

#[test]
fn conformal_factor_json_forms() {
    let a = ConformalFactor::from_json(r#"{"mean": 0.0, "cos": [0.3], "sin": [0.0, 0.1]}"#).unwrap();
    let b = ConformalFactor::from_json("[0.0, 0.3, 0.0, 0.0, 0.1]").unwrap();
    assert_eq!(a.degree(), 2);
    for th in [0.0, 1.0, 2.5] {
        assert!((a.eval(th) - b.eval(th)).abs() < 1e-15);
    }
    assert!(ConformalFactor::from_json("[]").is_err());
    assert!(ConformalFactor::from_json("{").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn multiplication_by_one_is_identity(k in 1usize..20) {
        let op = build_dn_truncated(DISC, k).unwrap();
        let m = multiplication_matrix(&op, |_| 1.0);
        let id = nalgebra::DMatrix::<f64>::identity(2 * k + 1, 2 * k + 1);
        prop_assert!((m - id).amax() < 1e-13);
    }

    #[test]
    fn kernel_persists_along_the_family(t in -1.0f64..1.0, a in -0.4f64..0.4, b in -0.4f64..0.4) {
        let omega = ConformalFactor::new(0.0, vec![a], vec![b]).unwrap();
        let op = build_dn_truncated(DISC, 24).unwrap();
        let nt = conformal_family(&op, &omega, t).unwrap();
        let ev = nt.eigenvalues();
        prop_assert!(ev[0].abs() < KERNEL_THRESHOLD);
        prop_assert!(ev[1] > 0.1);
    }
}
