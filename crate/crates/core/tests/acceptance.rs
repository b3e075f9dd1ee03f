//! One line per acceptance criterion; exits nonzero if any fails.

use std::f64::consts::{E, PI};
use std::time::Instant;

use dndet::det_engine::{
    cylinder_scattering_route, dirichlet_det, dirichlet_log_det_at_one, theorem2_value, theorem4_pipeline,
    zero_volume_cylinder_numeric, SurfaceTopology, Theorem2Data,
};
use dndet::dn_explicit::{
    annulus_det_prime, cylinder_scattering_mode0, disc_det_prime, AnnulusGeometry, CylinderGeometry, Geometry,
};
use dndet::hyperbolic::{
    enumerate_classes, exponent_from_spectrum, GroupPresentation, LengthSpectrum, MobiusTransform,
};
use dndet::numeric_dn::{convergence_table, is_monotone, ConformalFactor};
use dndet::specfun::{log_barnes_g, log_gamma, riemann_zeta, zeta_derivative};
use dndet::zeta_dyn::{check_rz_identity, ruelle_limit_order};
use dndet::zeta_reg::{combine, log_det, DecayBound, EigenSequence, HeadEigenvalue};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn appendix() -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    for rho in [1.5, 2.0, E, 10.0, 100.0] {
        let start = Instant::now();
        let r = annulus_det_prime(&AnnulusGeometry::new(rho).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed().as_secs_f64());
        worst = worst.max(rel(r.value, 2.0 * PI / rho.ln()));
    }
    verdict(worst <= 1e-12 && slowest < 1.0, format!("max rel err {worst:.2e}, slowest {slowest:.3}s"))
}

fn disc() -> Outcome {
    let mut worst = 0.0f64;
    for radius in [0.5, 1.0, 7.0] {
        let r = disc_det_prime(radius).map_err(|e| e.to_string())?;
        worst = worst.max(rel(r.det_prime.unwrap(), 2.0 * PI * radius));
    }
    verdict(worst <= 1e-12, format!("max rel err {worst:.2e}"))
}

fn bridge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let ell: f64 = rng.gen_range(0.1..20.0);
        let g = CylinderGeometry::new(ell).map_err(|e| e.to_string())?;
        worst = worst.max((ell / PI - 2.0 * PI / g.bridge_rho.ln()).abs());
    }
    verdict(worst <= 1e-12, format!("max abs err {worst:.2e}"))
}

fn scattering_route() -> Outcome {
    let mut worst = 0.0f64;
    for ell in [0.5, 1.0, 3.0, 10.0] {
        let spec = LengthSpectrum::cyclic(ell).map_err(|e| e.to_string())?;
        let limit = ruelle_limit_order(&spec).map_err(|e| e.to_string())?;
        worst = worst.max(rel(2.0 / PI * limit, 2.0 * ell * ell / PI));
        let (_, ratio) = cylinder_scattering_route(ell, 2.0 * ell).map_err(|e| e.to_string())?;
        let t2 =
            theorem2_value(&SurfaceTopology::cylinder(), Theorem2Data::Cylinder(ell)).map_err(|e| e.to_string())?;
        worst = worst.max(rel(ratio, t2.value));
    }
    verdict(worst <= 1e-10, format!("max rel err {worst:.2e}"))
}

fn mode0_taylor() -> Outcome {
    let mut worst = 0.0f64;
    for d in [1e-2, 1e-3, 1e-4] {
        for lambda in [1.0 - d, 1.0 + d] {
            let s = cylinder_scattering_mode0(c(lambda, 0.0)).map_err(|e| e.to_string())?.re;
            worst = worst.max((s / (0.5 * PI * d * d) - 1.0).abs() / (10.0 * d));
        }
    }
    verdict(worst <= 1.0, format!("max |S/((pi/2)(1-l)^2) - 1| / (10|1-l|) = {worst:.3}"))
}

fn random_sequence(rng: &mut ChaCha8Rng, mult: u32) -> EigenSequence {
    let (a, rate, phase) = (rng.gen_range(-0.9..0.9), rng.gen_range(0.3..3.0), rng.gen_range(0.0..PI));
    let head = (0..rng.gen_range(0..3))
        .map(|_| HeadEigenvalue { value: rng.gen_range(0.1..10.0), multiplicity: rng.gen_range(1..4) })
        .collect();
    let eps = move |n: usize| a * (-rate * n as f64).exp() * (phase * n as f64).cos();
    EigenSequence::from_fn(
        rng.gen_range(0.5..3.0),
        rng.gen_range(0.1..10.0),
        eps,
        DecayBound::new(a.abs(), rate),
        head,
        mult,
    )
    .expect("valid random sequence")
}

fn lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut additive = 0.0f64;
    let mut closed = 0.0f64;
    for _ in 0..1000 {
        let m = rng.gen_range(1..4);
        let u = random_sequence(&mut rng, m);
        let v = random_sequence(&mut rng, m);
        let w = combine(&u, &v).map_err(|e| e.to_string())?;
        let (lu, lv, lw) = (log_det(&u).log_value, log_det(&v).log_value, log_det(&w).log_value);
        additive = additive.max((lw - lu - lv).abs() / (1.0 + lw.abs()));
        let corr: f64 = u.corrections().iter().map(|e| e.ln_1p()).sum();
        let head: f64 = u.head().iter().map(|h| h.multiplicity as f64 * h.value.ln()).sum();
        let expect = m as f64 * (0.5 * u.power() * (2.0 * PI).ln() - 0.5 * u.prefactor().ln() + corr) + head;
        closed = closed.max((lu - expect).abs() / (1.0 + expect.abs()));
    }
    let seq = EigenSequence::from_fn(1.0, 1.0, |n| (-(n as f64)).exp(), DecayBound::new(1.0, 1.0), vec![], 1)
        .map_err(|e| e.to_string())?;
    let oracle = (log_det(&seq).log_value - common::oracle_log_det()).abs();
    verdict(
        additive <= 1e-12 && closed <= 1e-12 && oracle <= 1e-9,
        format!("additivity {additive:.2e}, closed form {closed:.2e}, e^-n oracle {oracle:.2e}"),
    )
}

fn zeta_identity() -> Outcome {
    let start = Instant::now();
    let mut cyclic = 0.0f64;
    for ell in [0.5, 1.0, 3.0] {
        let spec = LengthSpectrum::cyclic(ell).map_err(|e| e.to_string())?;
        for lambda in [0.5, 1.0, 2.0] {
            cyclic = cyclic.max(check_rz_identity(&spec, c(lambda, 0.0), 0.0).map_err(|e| e.to_string())?.residual);
        }
    }
    let g = GroupPresentation::new(
        vec![MobiusTransform::unit_circle_translation(4.0), MobiusTransform::dilation(4.0)],
        vec![],
    )
    .map_err(|e| e.to_string())?;
    let spec = enumerate_classes(&g, 12, dndet::hyperbolic::DEFAULT_WORD_BUDGET).map_err(|e| e.to_string())?;
    let delta = exponent_from_spectrum(&spec).map_err(|e| e.to_string())?.delta;
    let mut schottky = true;
    let mut margin = 0.0f64;
    for lambda in [1.5, 2.0, 3.0] {
        let r = check_rz_identity(&spec, c(lambda, 0.0), delta).map_err(|e| e.to_string())?;
        schottky &= r.holds();
        margin = margin.max(r.residual / r.bound);
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        cyclic <= 1e-14 && schottky && secs < 30.0,
        format!("cyclic residual {cyclic:.2e}, Schottky residual/bound {margin:.2e} (delta {delta:.3}), {secs:.2}s"),
    )
}

fn pipeline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut paths, mut dirichlet) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let zg: f64 = rng.gen_range(-6.0f64..6.0).exp();
        let z0: f64 = rng.gen_range(-6.0f64..6.0).exp();
        let chi = rng.gen_range(-12i64..=-1);
        let ell = rng.gen_range(0.01..30.0);
        let t = SurfaceTopology::from_euler(chi).map_err(|e| e.to_string())?;
        let r = theorem4_pipeline(zg, z0, &t, ell).map_err(|e| e.to_string())?;
        paths = paths.max(rel(r.value, r.cross_check.unwrap()));
        let full = dirichlet_det(1.0, z0, &t, ell).map_err(|e| e.to_string())?;
        let simple = dirichlet_log_det_at_one(z0, &t, ell).map_err(|e| e.to_string())?.exp();
        dirichlet = dirichlet.max(rel(full, simple));
    }
    verdict(paths <= 1e-12 && dirichlet <= 1e-12, format!("two-path {paths:.2e}, Dirichlet at 1 {dirichlet:.2e}"))
}

fn derivative_identity() -> Outcome {
    let omega = ConformalFactor::new(0.0, vec![0.3], vec![]).map_err(|e| e.to_string())?;
    let ts: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let rows =
        convergence_table(Geometry::Disc { radius: 1.0 }, &omega, &[16, 32, 64], &ts).map_err(|e| e.to_string())?;
    let table: Vec<String> = rows.iter().map(|r| format!("K={} {:.1e}", r.k, r.max_residual)).collect();
    let at64 = rows[2].max_residual;
    verdict(at64 <= 1e-6 && is_monotone(&rows, 1e-9), format!("{} (monotone above 1e-9)", table.join(", ")))
}

fn log_distance(a: Complex64, b: Complex64) -> f64 {
    let d = a - b;
    let k = (d.im / (2.0 * PI)).round();
    c(d.re, d.im - 2.0 * PI * k).norm()
}

fn special_functions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let z = c(rng.gen_range(0.05..12.0), rng.gen_range(-6.0..6.0));
        let g1 = log_gamma(z + 1.0).map_err(|e| e.to_string())?.value;
        let g0 = log_gamma(z).map_err(|e| e.to_string())?.value;
        worst = worst.max(log_distance(g1, g0 + z.ln()) / (1.0 + g1.norm()));
        let b1 = log_barnes_g(z + 1.0).map_err(|e| e.to_string())?.value;
        let b0 = log_barnes_g(z).map_err(|e| e.to_string())?.value;
        worst = worst.max(log_distance(b1, b0 + g0) / (1.0 + b1.norm()));
    }
    let z0 = (riemann_zeta(c(0.0, 0.0)).map_err(|e| e.to_string())?.re() + 0.5).abs();
    let zp0 = (zeta_derivative(c(0.0, 0.0)).map_err(|e| e.to_string())?.re() + 0.5 * (2.0 * PI).ln()).abs();
    let zpm1 =
        (zeta_derivative(c(-1.0, 0.0)).map_err(|e| e.to_string())?.re() - common::zeta_prime_minus_one_oracle()).abs();
    let all = worst.max(z0).max(zp0).max(zpm1);
    verdict(all <= 1e-9, format!("recurrences {worst:.2e}, zeta(0) {z0:.2e}, zeta'(0) {zp0:.2e}, zeta'(-1) {zpm1:.2e}"))
}

fn zero_volume() -> Outcome {
    let mut worst = 0.0f64;
    for ell in [1.0, 3.0] {
        worst = worst.max(zero_volume_cylinder_numeric(ell).map_err(|e| e.to_string())?.volume.abs());
    }
    verdict(worst <= 1e-8, format!("max |V| {worst:.2e}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("annulus ratio 2 pi / ln rho", appendix),
        ("disc det' = boundary length", disc),
        ("cylinder-annulus bridge", bridge),
        ("cylinder scattering route", scattering_route),
        ("mode-0 scattering Taylor", mode0_taylor),
        ("regularized determinant lemma", lemma),
        ("Ruelle-Selberg identity", zeta_identity),
        ("doubling pipeline two paths", pipeline),
        ("conformal derivative identity", derivative_identity),
        ("special functions", special_functions),
        ("cylinder renormalized volume", zero_volume),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
