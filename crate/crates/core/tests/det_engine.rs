use std::f64::consts::PI;

use dndet::det_engine::{
    cd_constants, cylinder_scattering_route, dirichlet_det, dirichlet_log_det, dirichlet_log_det_at_one,
    functional_equation_rhs, length_spectrum_relation, length_spectrum_rhs, sarnak_det,
    scattering_log_det_integral_form, theorem2_value, theorem4_pipeline, zero_volume, zero_volume_cylinder_numeric,
    HeatCoefficients, SurfaceTopology, Theorem2Data,
};
use dndet::dn_explicit::{annulus_det_prime, AnnulusGeometry};
use dndet::specfun::{log_barnes_g, log_gamma};
use dndet::Method;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn cylinder_case_matches_conformal_annulus() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let ell: f64 = rng.gen_range(0.1..20.0);
        let t2 = theorem2_value(&SurfaceTopology::cylinder(), Theorem2Data::Cylinder(ell)).unwrap();
        let rho = (2.0 * PI * PI / ell).exp();
        let ann = annulus_det_prime(&AnnulusGeometry::new(rho).unwrap()).unwrap();
        assert!(rel(t2.value, ann.value) < 1e-12, "ell {ell}");
        assert!((ell / PI - 2.0 * PI / rho.ln()).abs() < 1e-12);
    }
}

#[test]
fn disc_case_is_one() {
    let r = theorem2_value(&SurfaceTopology::disc(), Theorem2Data::None).unwrap();
    assert_eq!(r.value, 1.0);
}

#[test]
fn negative_case_divides_the_limit_by_chi() {
    let t = SurfaceTopology::from_euler(-3).unwrap();
    let r = theorem2_value(&t, Theorem2Data::Limit(-1.2)).unwrap();
    assert!((r.value - 0.4).abs() < 1e-15);
    assert_eq!(r.method, Method::FunctionalEquation);
}

#[test]
fn scattering_route_reproduces_cylinder_value() {
    for ell in [0.3, 1.0, 2.0, 7.5, 20.0] {
        let (det, ratio) = cylinder_scattering_route(ell, 2.0 * ell).unwrap();
        // (2/pi) lim R(mu)/mu^2 for the representative l^2 dt^2
        assert!(rel(det, 2.0 * ell * ell / PI) < 1e-10, "ell {ell}");
        assert!(rel(ratio, ell / PI) < 1e-10);
        let (det2, ratio2) = cylinder_scattering_route(ell, 5.0).unwrap();
        assert!(rel(det2 / 5.0, ratio2) < 1e-15);
        assert!(rel(ratio2, ell / PI) < 1e-10);
    }
}

#[test]
fn disc_functional_equation_forms_agree() {
    let disc = SurfaceTopology::disc();
    for lambda in [0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95] {
        let barnes =
            functional_equation_rhs(Complex64::new(lambda, 0.0), &disc, |_| Ok(Complex64::new(0.0, 0.0))).unwrap();
        let integral = scattering_log_det_integral_form(lambda, &disc).unwrap();
        assert!((barnes.re - integral).abs() < 1e-10, "lambda {lambda}: {} vs {integral}", barnes.re);
        assert!(barnes.im.abs() < 1e-12);
    }
    let half = functional_equation_rhs(Complex64::new(0.5, 0.0), &disc, |_| Ok(Complex64::new(0.0, 0.0))).unwrap();
    assert!(half.norm() < 1e-14);
}

#[test]
fn renormalized_volume_of_the_cylinder_vanishes() {
    for ell in [1.0, 3.0] {
        let fit = zero_volume_cylinder_numeric(ell).unwrap();
        assert!(fit.volume.abs() <= 1e-8, "ell {ell}: {}", fit.volume);
        // Vol(x > eps) = 2 l / eps exactly
        assert!(rel(fit.c0, 2.0 * ell) < 1e-10);
        for (e, v) in fit.eps.iter().zip(&fit.volumes) {
            assert!(rel(*v, 2.0 * ell / e) < 1e-12);
        }
    }
    assert_eq!(zero_volume(&SurfaceTopology::cylinder()), 0.0);
}

#[test]
fn sarnak_determinant_special_values() {
    let eta = 2.0 * dndet::specfun::zeta_derivative(Complex64::new(-1.0, 0.0)).unwrap().re() - 0.25 + 0.5 * LN_2PI;
    let t = SurfaceTopology::from_euler(-1).unwrap();
    assert!(rel(sarnak_det(1.0, &t).unwrap(), (2.0 * eta).exp()) < 1e-14);
    assert_eq!(sarnak_det(0.7, &SurfaceTopology::cylinder()).unwrap(), 0.7);
}

#[test]
fn heat_expansion_captures_large_lambda_growth() {
    let t = SurfaceTopology::new(1, 2).unwrap();
    let ell = 3.0;
    let h = HeatCoefficients::new(&t, ell);
    let gap = |lambda: f64| (dirichlet_log_det(lambda, 1.0, &t, ell).unwrap() - h.log_det_asymptotic(lambda)).abs();
    let (a, b, c) = (gap(10.0), gap(20.0), gap(40.0));
    assert!(b < a && c < b, "{a} {b} {c}");
    assert!(c < 0.05, "{c}");
}

#[test]
fn specified_pipeline_example() {
    let t = SurfaceTopology::from_euler(-2).unwrap();
    let r = theorem4_pipeline(0.7, 1.3, &t, 5.0).unwrap();
    assert!(rel(r.value, r.cross_check.unwrap()) < 1e-12);
    assert!(r.value > 0.0);
    let small = theorem4_pipeline(0.7, 1.3, &SurfaceTopology::from_euler(-1).unwrap(), 1e-9).unwrap();
    assert!(rel(small.value, 0.7 / (1.69 * 2.0 * PI)) < 1e-8);
}

fn admissible() -> impl Strategy<Value = (f64, f64, i64, f64)> {
    (-6.0f64..6.0, -6.0f64..6.0, -12i64..=-1, 0.01f64..30.0).prop_map(|(a, b, chi, ell)| (a.exp(), b.exp(), chi, ell))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pipeline_two_paths_agree((zg, z0, chi, ell) in admissible()) {
        let t = SurfaceTopology::from_euler(chi).unwrap();
        let r = theorem4_pipeline(zg, z0, &t, ell).unwrap();
        let by_hand = -zg * (ell / 4.0).exp() / (z0 * z0 * 2.0 * PI * chi as f64);
        prop_assert!(rel(r.value, r.cross_check.unwrap()) <= 1e-12);
        prop_assert!(rel(r.value, by_hand) <= 1e-12);
    }

    #[test]
    fn dirichlet_at_one_two_paths_agree((_zg, z0, chi, ell) in admissible()) {
        let t = SurfaceTopology::from_euler(chi).unwrap();
        let full = dirichlet_det(1.0, z0, &t, ell).unwrap();
        let simple = dirichlet_log_det_at_one(z0, &t, ell).unwrap().exp();
        prop_assert!(rel(full, simple) <= 1e-12, "{full} vs {simple}");
    }

    #[test]
    fn dirichlet_determinant_matches_cd_form((_zg, z0, chi, ell) in admissible(), lambda in 0.1f64..6.0) {
        let t = SurfaceTopology::from_euler(chi).unwrap();
        let (c, d) = cd_constants(&t, ell).unwrap();
        let l = Complex64::new(lambda, 0.0);
        let factor = -2.0 * log_barnes_g(l).unwrap().re() + lambda * LN_2PI - log_gamma(l).unwrap().re();
        let expect = z0.ln() - ell * lambda / 4.0 + c * lambda * (1.0 - lambda) + d - chi as f64 * factor;
        let got = dirichlet_log_det(lambda, z0, &t, ell).unwrap();
        prop_assert!((got - expect).abs() <= 1e-11 * (1.0 + expect.abs()), "{got} vs {expect}");
    }

    #[test]
    fn length_relation_measures_the_discrepancy((zg, z0, chi, ell) in admissible(), shift in -1.0f64..1.0) {
        let t = SurfaceTopology::from_euler(chi).unwrap();
        let rhs = length_spectrum_rhs(zg, z0, &t, ell).unwrap();
        prop_assert!(rhs < 0.0);
        let exact = length_spectrum_relation(rhs, zg, z0, &t, ell).unwrap();
        prop_assert!(exact == 0.0);
        let off = length_spectrum_relation(rhs + shift, zg, z0, &t, ell).unwrap();
        prop_assert!((off - shift.abs()).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }
}
