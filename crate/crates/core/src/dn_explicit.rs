//! Closed-form DN maps of the flat disc and of the flat annulus
//! `1 < |z| < rho`, and the scattering data of the hyperbolic cylinder.
//!
//! On the annulus, functions are written in the basis
//! `(trace on |z| = rho, trace on |z| = 1)`, mode by mode. The DN map sends
//! Dirichlet data to minus the interior normal derivative of the harmonic
//! extension; the interior normal is `-d/dr` on the outer circle and `+d/dr`
//! on the inner one. The resulting 2x2 mode blocks are not symmetric:
//! self-adjointness holds for the boundary measure `rho dtheta` on the outer
//! circle and `dtheta` on the inner one, so conjugating by `W^(1/2)`,
//! `W = diag(rho, 1)`, symmetrizes them without changing eigenvalues.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{DetReport, Method};
use crate::specfun::{hyp2f1, log_gamma, reciprocal_gamma};
use crate::zeta_reg::{combine, log_det, DecayBound, EigenSequence, HeadEigenvalue};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusGeometry {
    pub rho: f64,
    pub alpha: f64,
    pub boundary_length: f64,
}

impl AnnulusGeometry {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 1.0) {
            return Err(Error::InvalidInput(format!("annulus needs rho > 1, got {rho}")));
        }
        Ok(Self { rho, alpha: rho.ln(), boundary_length: 2.0 * PI * (1.0 + rho) })
    }

    /// Nonzero eigenvalue of the constant mode, `(1 + rho) / (rho ln rho)`.
    pub fn mode0_eigenvalue(&self) -> f64 {
        (1.0 + self.rho) / (self.rho * self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Disc { radius: f64 },
    Annulus { rho: f64 },
}

/// One Fourier mode of a DN map.
#[derive(Debug, Clone, PartialEq)]
pub struct DnBlock {
    pub mode: i64,
    pub entries: DMatrix<f64>,
    pub geometry: Geometry,
}

impl DnBlock {
    /// Boundary arc-length weights of the basis functions.
    pub fn weights(&self) -> Vec<f64> {
        match self.geometry {
            Geometry::Disc { radius } => vec![radius],
            Geometry::Annulus { rho } => vec![rho, 1.0],
        }
    }

    /// `W^(1/2) N W^(-1/2)`, symmetric.
    pub fn symmetrized(&self) -> DMatrix<f64> {
        let w: Vec<f64> = self.weights().iter().map(|x| x.sqrt()).collect();
        DMatrix::from_fn(self.entries.nrows(), self.entries.ncols(), |i, j| w[i] * self.entries[(i, j)] / w[j])
    }

    /// `W N`, which is symmetric exactly when N is self-adjoint for the weights.
    pub fn weighted(&self) -> DMatrix<f64> {
        let w = self.weights();
        DMatrix::from_fn(self.entries.nrows(), self.entries.ncols(), |i, j| w[i] * self.entries[(i, j)])
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }
}

pub fn annulus_block(geom: &AnnulusGeometry, n: i64) -> DnBlock {
    let a = geom.alpha;
    let e = (-a).exp();
    let entries = if n == 0 {
        let k = 1.0 / a;
        DMatrix::from_row_slice(2, 2, &[k * e, -k * e, -k, k])
    } else {
        let m = n.unsigned_abs() as f64;
        let (sh, ch) = ((m * a).sinh(), (m * a).cosh());
        let k = m / sh;
        DMatrix::from_row_slice(2, 2, &[k * e * ch, -k * e, -k, k * ch])
    };
    DnBlock { mode: n, entries, geometry: Geometry::Annulus { rho: geom.rho } }
}

pub fn disc_block(radius: f64, n: i64) -> DnBlock {
    DnBlock {
        mode: n,
        entries: DMatrix::from_element(1, 1, n.unsigned_abs() as f64 / radius),
        geometry: Geometry::Disc { radius },
    }
}

/// Relative corrections of the mode-n eigenvalues:
/// `lambda_+ = |n| (1 + eps_+)`, `lambda_- = |n| e^(-alpha) (1 + eps_-)`,
/// with `(1 + eps_+)(1 + eps_-) = 1`.
struct ModeCorrections {
    plus: f64,
    minus: f64,
}

fn mode_corrections(alpha: f64, m: f64) -> ModeCorrections {
    let q = (-2.0 * m * alpha).exp();
    let one_minus_q = -(-2.0 * m * alpha).exp_m1();
    let s = (0.5 * alpha).sinh();
    let d = 4.0 * q / ((1.0 + q) * (1.0 + q));
    let x = (-0.5 * alpha).exp() * d / ((s * s + d).sqrt() + s);
    let g = 2.0 * q / one_minus_q;
    let plus = g + x + g * x;
    ModeCorrections { plus, minus: -plus / (1.0 + plus) }
}

/// Bound `|eps_+-(n)| <= C e^(-2 alpha n)`.
fn correction_bound(alpha: f64) -> DecayBound {
    let big_a = 2.0 / -(-2.0 * alpha).exp_m1();
    let big_b = 2.0 * (-0.5 * alpha).exp() / (0.5 * alpha).sinh();
    DecayBound::new(big_a + big_b + big_a * big_b * (-2.0 * alpha).exp(), 2.0 * alpha)
}

/// `(lambda_+, lambda_-)` of mode `n != 0`, computed without cancellation.
pub fn annulus_eigenvalues(geom: &AnnulusGeometry, n: i64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidInput("mode 0 has a kernel; use annulus_block".into()));
    }
    let m = n.unsigned_abs() as f64;
    let eps = mode_corrections(geom.alpha, m);
    Ok((m * (1.0 + eps.plus), m * (-geom.alpha).exp() * (1.0 + eps.minus)))
}

/// The two tail families `lambda_+` and `lambda_-` (each for n and -n).
pub fn annulus_sequences(geom: &AnnulusGeometry) -> Result<(EigenSequence, EigenSequence)> {
    let a = geom.alpha;
    let bound = correction_bound(a);
    let plus = EigenSequence::from_fn(1.0, 1.0, |n| mode_corrections(a, n as f64).plus, bound, vec![], 2)?;
    let minus = EigenSequence::from_fn(1.0, (-a).exp(), |n| mode_corrections(a, n as f64).minus, bound, vec![], 2)?;
    Ok((plus, minus))
}

/// The nonzero DN spectrum of the annulus as one sequence: tail
/// `lambda_+ lambda_- = n^2 e^(-alpha)` (twice) and head `(1 + rho)/(rho ln rho)`.
pub fn annulus_spectrum(geom: &AnnulusGeometry) -> Result<EigenSequence> {
    let (plus, minus) = annulus_sequences(geom)?;
    combine(&plus, &minus)?.with_head(vec![HeadEigenvalue { value: geom.mode0_eigenvalue(), multiplicity: 1 }])
}

/// `det' N / l(boundary)` of the annulus from its spectrum; the closed form is
/// `2 pi / ln rho`.
pub fn annulus_det_prime(geom: &AnnulusGeometry) -> Result<DetReport> {
    let seq = annulus_spectrum(geom)?;
    let d = log_det(&seq);
    let (plus, minus) = annulus_sequences(geom)?;
    let split = log_det(&plus).log_value + log_det(&minus).log_value + geom.mode0_eigenvalue().ln();
    let det = d.value();
    let ratio = (d.log_value - geom.boundary_length.ln()).exp();
    let mut r = DetReport::new(ratio, Method::ZetaPipeline, ratio * (d.truncation_error + 4.0 * f64::EPSILON))
        .input("rho", geom.rho)
        .with_metric(det, geom.boundary_length);
    r.n_tail = Some(seq.n_tail());
    r.cross_check = Some((split - geom.boundary_length.ln()).exp());
    Ok(r)
}

/// Disc of radius R: spectrum `n / R`, each twice, plus the constants in the kernel.
pub fn disc_det_prime(radius: f64) -> Result<DetReport> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
    }
    let seq = EigenSequence::pure(1.0, 1.0 / radius, 2)?;
    let d = log_det(&seq);
    let length = 2.0 * PI * radius;
    let ratio = (d.log_value - length.ln()).exp();
    Ok(DetReport::new(ratio, Method::ZetaPipeline, ratio * (d.truncation_error + 4.0 * f64::EPSILON))
        .input("radius", radius)
        .with_metric(d.value(), length))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderGeometry {
    pub ell: f64,
    /// `e^(2 pi^2 / ell)`: the annulus conformal to the cylinder.
    pub bridge_rho: f64,
}

impl CylinderGeometry {
    pub fn new(ell: f64) -> Result<Self> {
        if !(ell.is_finite() && ell > 0.0) {
            return Err(Error::InvalidInput(format!("geodesic length must be positive, got {ell}")));
        }
        let bridge_rho = (2.0 * PI * PI / ell).exp();
        if !bridge_rho.is_finite() {
            return Err(Error::InvalidInput(format!("ell = {ell} too small: the conformal annulus overflows")));
        }
        Ok(Self { ell, bridge_rho })
    }
}

/// `ell / pi`, cross-checked against the annulus pipeline at `bridge_rho`.
pub fn cylinder_det_prime(geom: &CylinderGeometry) -> Result<DetReport> {
    let ratio = geom.ell / PI;
    let annulus = annulus_det_prime(&AnnulusGeometry::new(geom.bridge_rho)?)?;
    let mut r = DetReport::new(ratio, Method::ClosedForm, 2.0 * f64::EPSILON * ratio).input("ell", geom.ell);
    r.cross_check = Some(annulus.value);
    Ok(r)
}

/// `U(z) = exp(2 i pi log(z) / ell + 2 pi^2 / ell)`, mapping the upper half-plane
/// modulo `z -> e^ell z` onto the annulus `1 < |w| < e^(2 pi^2/ell)`.
pub fn uniformizing_map(z: Complex64, ell: f64) -> Result<Complex64> {
    if !(z.im > 0.0 && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidInput(format!("{z} is not in the upper half-plane")));
    }
    if !(ell.is_finite() && ell > 0.0) {
        return Err(Error::InvalidInput(format!("geodesic length must be positive, got {ell}")));
    }
    let w = Complex64::new(0.0, 2.0 * PI / ell) * z.ln() + 2.0 * PI * PI / ell;
    Ok(w.exp())
}

/// Mode-0 scattering coefficient of the hyperbolic cylinder for the boundary
/// metric `ell^2 dt^2`: `2^(2 lambda - 1) (Gamma(lambda/2) / Gamma((1 - lambda)/2))^2`.
pub fn cylinder_scattering_mode0(lambda: Complex64) -> Result<Complex64> {
    let lg = log_gamma(lambda * 0.5)?;
    let rg = reciprocal_gamma((Complex64::new(1.0, 0.0) - lambda) * 0.5);
    let log_pref = (lambda * 2.0 - 1.0) * 2f64.ln() + lg.value * 2.0;
    Ok(log_pref.exp() * rg * rg)
}

/// `u_lambda(r)`: the mode-0 generalized eigenfunction with boundary data 1.
pub fn cylinder_mode0_solution(lambda: f64, r: f64) -> Result<f64> {
    let one = Complex64::new(1.0, 0.0);
    let l = Complex64::new(lambda, 0.0);
    let sh = r.sinh().abs();
    let z = Complex64::new(-1.0 / (sh * sh), 0.0);
    let f1 = hyp2f1((one - l) * 0.5, one - l * 0.5, one * 1.5 - l, z)?;
    let f2 = hyp2f1(l * 0.5, (l + one) * 0.5, l + one * 0.5, z)?;
    // (Gamma(l/2) / Gamma((1-l)/2))^2 Gamma(1/2 - l) / Gamma(l - 1/2)
    let coef = (log_gamma(l * 0.5)?.value * 2.0 + log_gamma(one * 0.5 - l)?.value).exp()
        * reciprocal_gamma((one - l) * 0.5).powi(2)
        * reciprocal_gamma(l - one * 0.5);
    let u = f1.value * sh.powf(lambda - 1.0) + coef * f2.value * sh.powf(-lambda);
    Ok(u.re)
}

/// Maximum over `r_grid` of `|-u'' - tanh(r) u' - lambda (1 - lambda) u|`,
/// derivatives by 5-point central differences with step 1e-3.
pub fn cylinder_poisson_check(lambda: f64, r_grid: &[f64]) -> Result<f64> {
    const H: f64 = 1e-3;
    if !(lambda > 0.5 && lambda < 1.5) {
        return Err(Error::InvalidInput(format!("lambda must lie in (0.5, 1.5), got {lambda}")));
    }
    let mut worst = 0.0f64;
    for &r in r_grid {
        if !(r.is_finite() && r.abs() > 2.0 * H + 1e-9) {
            return Err(Error::InvalidInput(format!("grid point {r} touches the core geodesic r = 0")));
        }
        let u = |k: f64| cylinder_mode0_solution(lambda, r + k * H);
        let (um2, um1, u0, up1, up2) = (u(-2.0)?, u(-1.0)?, u(0.0)?, u(1.0)?, u(2.0)?);
        let d1 = (um2 - 8.0 * um1 + 8.0 * up1 - up2) / (12.0 * H);
        let d2 = (-um2 + 16.0 * um1 - 30.0 * u0 + 16.0 * up1 - up2) / (12.0 * H * H);
        let res = -d2 - r.tanh() * d1 - lambda * (1.0 - lambda) * u0;
        worst = worst.max(res.abs());
    }
    Ok(worst)
}
