use std::f64::consts::PI;

use dndet::dn_explicit::{
    annulus_block, annulus_det_prime, annulus_eigenvalues, cylinder_det_prime, cylinder_poisson_check,
    cylinder_scattering_mode0, disc_block, disc_det_prime, uniformizing_map, AnnulusGeometry, CylinderGeometry,
};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Radial profile of the harmonic function with mode `m` taking the values
/// `outer` at `r = rho` and `inner` at `r = 1`.
fn harmonic_profile(rho: f64, m: u32, outer: f64, inner: f64) -> impl Fn(f64) -> f64 {
    let (p, q) = if m == 0 {
        // A + B ln r
        (inner, (outer - inner) / rho.ln())
    } else {
        // A r^m + B r^-m
        let rm = rho.powi(m as i32);
        let a = (outer - inner / rm) / (rm - 1.0 / rm);
        (a, inner - a)
    };
    move |r: f64| {
        if m == 0 {
            p + q * r.ln()
        } else {
            p * r.powi(m as i32) + q * r.powi(-(m as i32))
        }
    }
}

#[test]
fn annulus_blocks_match_finite_difference_normal_derivatives() {
    let h = 1e-5;
    for rho in [1.5, 2.0, 5.0] {
        let g = AnnulusGeometry::new(rho).unwrap();
        for n in -32i64..=32 {
            let block = annulus_block(&g, n);
            let m = n.unsigned_abs() as u32;
            for (col, (outer, inner)) in [(1.0, 0.0), (0.0, 1.0)].into_iter().enumerate() {
                let u = harmonic_profile(rho, m, outer, inner);
                // the outward normal is d/dr outside and -d/dr inside
                let out_row = derivative(&u, rho, h);
                let in_row = -derivative(&u, 1.0, h);
                let scale = 1.0 + block.entries.column(col).amax();
                assert!((block.entries[(0, col)] - out_row).abs() < 1e-8 * scale, "rho {rho} n {n} col {col}");
                assert!((block.entries[(1, col)] - in_row).abs() < 1e-8 * scale, "rho {rho} n {n} col {col}");
            }
        }
    }
}

#[test]
fn disc_blocks_match_finite_difference_normal_derivatives() {
    for radius in [0.5, 1.0, 7.0] {
        for n in -32i64..=32 {
            let m = n.unsigned_abs() as i32;
            let u = |r: f64| (r / radius).powi(m);
            let d = derivative(u, radius, 1e-5 * radius);
            let got = disc_block(radius, n).entries[(0, 0)];
            assert!((got - d).abs() < 1e-8 * (1.0 + got), "radius {radius} n {n}");
        }
    }
}

#[test]
fn dense_eigensolver_agrees_with_cancellation_free_eigenvalues() {
    let g = AnnulusGeometry::new(2.0).unwrap();
    for n in 1..=32 {
        let sym = annulus_block(&g, n).symmetrized();
        let eig = SymmetricEigen::new(DMatrix::from(sym)).eigenvalues;
        let (hi, lo) = (eig.max(), eig.min());
        let (plus, minus) = annulus_eigenvalues(&g, n).unwrap();
        assert!((plus - hi).abs() < 1e-12 * plus, "n {n}");
        // the small eigenvalue loses relative accuracy in the dense solver
        assert!((minus - lo).abs() < 1e-12 * plus, "n {n}");
    }
}

#[test]
fn annulus_ratio_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut rhos = vec![1.5, 2.0, std::f64::consts::E, 10.0, 100.0];
    rhos.extend((0..20).map(|_| rng.gen_range(1.1..50.0)));
    for rho in rhos {
        let r = annulus_det_prime(&AnnulusGeometry::new(rho).unwrap()).unwrap();
        let expect = 2.0 * PI / rho.ln();
        assert!((r.value / expect - 1.0).abs() < 1e-12, "rho {rho}: {}", r.value);
        assert!((r.cross_check.unwrap() / expect - 1.0).abs() < 1e-12);
    }
}

#[test]
fn disc_det_prime_equals_length() {
    for radius in [0.5, 1.0, 7.0] {
        let r = disc_det_prime(radius).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!((r.det_prime.unwrap() / (2.0 * PI * radius) - 1.0).abs() < 1e-12);
    }
    assert!((disc_det_prime(1.0).unwrap().det_prime.unwrap() - 2.0 * PI).abs() < 1e-12);
}

#[test]
fn cylinder_matches_conformal_annulus() {
    for ell in [0.3, 1.0, 4.0, 15.0] {
        let r = cylinder_det_prime(&CylinderGeometry::new(ell).unwrap()).unwrap();
        assert!((r.value - ell / PI).abs() < 1e-12 * r.value);
        assert!((r.cross_check.unwrap() / r.value - 1.0).abs() < 1e-11);
    }
}

#[test]
fn uniformizing_map_sends_boundary_rays_to_circles() {
    let ell = 2.5;
    let rho = (2.0 * PI * PI / ell).exp();
    for theta in [1e-6, 0.3, 1.5, 3.0, PI - 1e-6] {
        let z = Complex64::from_polar(1.7, theta);
        let w = uniformizing_map(z, ell).unwrap();
        let expect = (2.0 * PI * (PI - theta) / ell).exp();
        assert!((w.norm() / expect - 1.0).abs() < 1e-12);
        assert!(w.norm() >= 1.0 - 1e-9 && w.norm() <= rho * (1.0 + 1e-9));
        let shifted = uniformizing_map(z * ell.exp(), ell).unwrap();
        assert!((shifted - w).norm() < 1e-10 * w.norm());
    }
}

#[test]
fn mode0_scattering_taylor_expansion() {
    for d in [1e-2, 1e-3, 1e-4] {
        for lambda in [1.0 - d, 1.0 + d] {
            let s = cylinder_scattering_mode0(Complex64::new(lambda, 0.0)).unwrap().re;
            let rel = s / (0.5 * PI * d * d) - 1.0;
            assert!(rel.abs() <= 10.0 * d, "lambda {lambda}: {rel}");
        }
    }
    let half = cylinder_scattering_mode0(Complex64::new(0.5, 0.0)).unwrap();
    assert!((half - 1.0).norm() < 1e-14);
}

#[test]
fn mode0_solution_solves_the_radial_equation() {
    let grid = [0.5, 1.0, 2.0, 3.5];
    for lambda in [0.7, 0.9, 1.2] {
        assert!(cylinder_poisson_check(lambda, &grid).unwrap() < 1e-6);
    }
}
