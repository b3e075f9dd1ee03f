//! Assembly of the determinant formulas for surfaces with boundary: the
//! three-case value of `det' N / l`, the functional equation of the
//! scattering determinant, the Dirichlet determinant through `Z_G0`, the
//! doubling pipeline, and the renormalized volume.
//!
//! Zeta values of cocompact groups at `lambda = 1` are caller-supplied; this
//! module only performs the exact assembly, always in log space.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::LengthSpectrum;
use crate::report::{DetReport, Method};
use crate::specfun::{eta_constant, log_barnes_g, log_gamma, zeta_derivative};
use crate::zeta_dyn::ruelle_limit_order;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceTopology {
    genus: u32,
    boundary_components: u32,
    euler: i64,
}

impl SurfaceTopology {
    pub fn new(genus: u32, boundary_components: u32) -> Result<Self> {
        if boundary_components == 0 {
            return Err(Error::Topology {
                chi: 2 - 2 * genus as i64,
                detail: "a surface with boundary needs at least one boundary component".into(),
            });
        }
        Ok(Self { genus, boundary_components, euler: 2 - 2 * genus as i64 - boundary_components as i64 })
    }

    pub fn disc() -> Self {
        Self { genus: 0, boundary_components: 1, euler: 1 }
    }

    pub fn cylinder() -> Self {
        Self { genus: 0, boundary_components: 2, euler: 0 }
    }

    /// Some topology with the given Euler characteristic (genus 0 when
    /// possible, otherwise one boundary component).
    pub fn from_euler(chi: i64) -> Result<Self> {
        if chi > 1 {
            return Err(Error::Topology { chi, detail: "chi <= 1 for surfaces with boundary".into() });
        }
        let n = 2 - chi;
        if n <= u32::MAX as i64 {
            Self::new(0, n as u32)
        } else {
            Err(Error::Topology { chi, detail: "too many boundary components".into() })
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn boundary_components(&self) -> u32 {
        self.boundary_components
    }

    pub fn euler(&self) -> i64 {
        self.euler
    }

    fn chi(&self) -> f64 {
        self.euler as f64
    }

    fn require_negative(&self) -> Result<()> {
        if self.euler >= 0 {
            return Err(Error::Topology { chi: self.euler, detail: "needs chi < 0".into() });
        }
        Ok(())
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Small-time heat invariants of the Dirichlet Laplacian,
/// `Tr e^{-t Delta} = t^{-1}(a1 + a2 t^{1/2} + a3 t) + o(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl HeatCoefficients {
    pub fn new(topology: &SurfaceTopology, boundary_length: f64) -> Self {
        let chi = topology.chi();
        Self { a1: -0.5 * chi, a2: -boundary_length / (8.0 * PI.sqrt()), a3: chi / 6.0 }
    }

    /// Large-`lambda` expansion of `log det(Delta - lambda(1 - lambda))` up to `o(1)`.
    pub fn log_det_asymptotic(&self, lambda: f64) -> f64 {
        let q = lambda * (lambda - 1.0);
        -self.a1 * q * q.ln() + self.a1 * q + 2.0 * PI.sqrt() * self.a2 * (lambda - 0.5) + self.a3 * q.ln()
    }
}

/// First-order coefficient of the small eigenvalue of the scattering
/// operator at 1: `-2 pi chi / l`.
pub fn beta(topology: &SurfaceTopology, boundary_length: f64) -> Result<f64> {
    positive("boundary length", boundary_length)?;
    Ok(-2.0 * PI * topology.chi() / boundary_length)
}

/// Renormalized volume `-2 pi chi`.
pub fn zero_volume(topology: &SurfaceTopology) -> f64 {
    -2.0 * PI * topology.chi()
}

/// Least-squares fit `Vol(x > eps) = c0 / eps + volume + c1 eps`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroVolumeFit {
    pub volume: f64,
    pub c0: f64,
    pub c1: f64,
    pub eps: Vec<f64>,
    pub volumes: Vec<f64>,
    pub max_residual: f64,
}

/// Renormalized volume of the hyperbolic cylinder `dr^2 + l^2 cosh^2 r dt^2`
/// with boundary defining function `x = 1 / |sinh r|`.
///
/// `{x > eps}` is `|r| < asinh(1/eps)`; its volume is integrated by
/// composite Gauss-Legendre quadrature and the constant term fitted.
pub fn zero_volume_cylinder_numeric(ell: f64) -> Result<ZeroVolumeFit> {
    positive("ell", ell)?;
    let rule = GaussLegendre::new(NonZeroUsize::new(16).expect("nonzero"));
    let eps: Vec<f64> = (0..10).map(|k| 0.2 * 0.5f64.powi(k)).collect();
    let volumes: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let r_max = (1.0 / e).asinh();
            let panels = 4 * r_max.ceil() as usize;
            let h = 2.0 * r_max / panels as f64;
            let mut total = 0.0;
            for p in 0..panels {
                let a = -r_max + p as f64 * h;
                total += rule.integrate(a, a + h, |r| ell * r.cosh());
            }
            total
        })
        .collect();
    let design = DMatrix::from_fn(eps.len(), 3, |i, j| match j {
        0 => 1.0 / eps[i],
        1 => 1.0,
        _ => eps[i],
    });
    let rhs = DVector::from_column_slice(&volumes);
    let coef = design.clone().svd(true, true).solve(&rhs, 1e-14).map_err(|e| Error::Fit(e.to_string()))?;
    if coef.iter().any(|c| !c.is_finite()) {
        return Err(Error::Fit("non-finite coefficients".into()));
    }
    let max_residual = (&design * &coef - &rhs).amax();
    Ok(ZeroVolumeFit { volume: coef[1], c0: coef[0], c1: coef[2], eps, volumes, max_residual })
}

/// `log det S(lambda)` from the functional equation
/// `det S = Z(1-l)/Z(l) [(2 pi)^{1-2l} Gamma(l) G(l)^2 / (Gamma(1-l) G(1-l)^2)]^{-chi}`.
///
/// `log_z` evaluates `log Z_Gamma`; pass `|_| Ok(0)` when `Z = 1` (the disc).
pub fn functional_equation_rhs<F>(lambda: Complex64, topology: &SurfaceTopology, log_z: F) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let one = Complex64::new(1.0, 0.0);
    let mirror = one - lambda;
    let zeta_part = log_z(mirror)? - log_z(lambda)?;
    if topology.euler == 0 {
        return Ok(zeta_part);
    }
    let bracket = (one - lambda * 2.0) * LN_2PI + log_gamma(lambda)?.value + log_barnes_g(lambda)?.value * 2.0
        - log_gamma(mirror)?.value
        - log_barnes_g(mirror)?.value * 2.0;
    Ok(zeta_part - bracket * topology.chi())
}

/// The topological factor of `log det S(lambda)` in its integral form,
/// `-2 pi chi int_0^{lambda - 1/2} t tan(pi t) dt`, for real `0 < lambda < 1`.
pub fn scattering_log_det_integral_form(lambda: f64, topology: &SurfaceTopology) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidInput(format!("integral form needs 0 < lambda < 1, got {lambda}")));
    }
    let rule = GaussLegendre::new(NonZeroUsize::new(20).expect("nonzero"));
    let b = lambda - 0.5;
    // tan(pi t) blows up at t = +-1/2; grade the panels towards the endpoint
    let panels = 60;
    let mut total = 0.0;
    for p in 0..panels {
        let x0 = 1.0 - (1.0 - p as f64 / panels as f64).powi(3);
        let x1 = 1.0 - (1.0 - (p + 1) as f64 / panels as f64).powi(3);
        total += rule.integrate(x0 * b, x1 * b, |t| t * (PI * t).tan());
    }
    Ok(-2.0 * PI * topology.chi() * total)
}

/// Input for the three-case value of `det' N / l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Theorem2Data {
    None,
    /// Length of the closed geodesic of the cylinder.
    Cylinder(f64),
    /// `lim_{lambda -> 0} (2 pi lambda)^{chi - 1} R_Gamma(lambda)`.
    Limit(f64),
}

pub fn theorem2_value(topology: &SurfaceTopology, data: Theorem2Data) -> Result<DetReport> {
    let chi = topology.euler;
    match (chi, data) {
        (1, _) => Ok(DetReport::new(1.0, Method::ClosedForm, 0.0).input("chi", 1.0)),
        (0, Theorem2Data::Cylinder(ell)) => {
            positive("ell", ell)?;
            let v = ell / PI;
            Ok(DetReport::new(v, Method::ClosedForm, f64::EPSILON * v).input("chi", 0.0).input("ell", ell))
        }
        (0, _) => Err(Error::InvalidInput("the cylinder needs its geodesic length".into())),
        (_, Theorem2Data::Limit(v)) => {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("limit must be finite, got {v}")));
            }
            let r = v / chi as f64;
            Ok(DetReport::new(r, Method::FunctionalEquation, f64::EPSILON * r.abs())
                .input("chi", chi as f64)
                .input("limit", v))
        }
        _ => Err(Error::UnsupportedContinuation),
    }
}

/// The cylinder value through the scattering route: `det' S(1)` for the
/// boundary metric `l^2 dt^2` is `(2/pi) lim R(mu)/mu^2`; for another
/// representative of total boundary length `length_h0` it is rescaled by
/// `length_h0 / 2l`. Returns `(det', det' / length_h0)`.
pub fn cylinder_scattering_route(ell: f64, length_h0: f64) -> Result<(f64, f64)> {
    positive("ell", ell)?;
    positive("boundary length", length_h0)?;
    let limit = ruelle_limit_order(&LengthSpectrum::cyclic(ell)?)?;
    let det = 2.0 / PI * limit * length_h0 / (2.0 * ell);
    Ok((det, det / length_h0))
}

/// `log det' Delta_M = log Z'_G(1) - 2 eta chi(X)` for the double `M` of `X`.
pub fn sarnak_log_det(zg_prime_at_1: f64, topology: &SurfaceTopology) -> Result<f64> {
    positive("Z'_G(1)", zg_prime_at_1)?;
    Ok(zg_prime_at_1.ln() - 2.0 * eta_constant() * topology.chi())
}

/// `det' Delta_M = Z'_G(1) e^{-2 eta chi(X)}`.
pub fn sarnak_det(zg_prime_at_1: f64, topology: &SurfaceTopology) -> Result<f64> {
    positive("Z'_G(1)", zg_prime_at_1)?;
    Ok(zg_prime_at_1 * (-2.0 * eta_constant() * topology.chi()).exp())
}

/// `log det(Delta_X - lambda(1 - lambda))` for the Dirichlet Laplacian of a
/// hyperbolic surface with geodesic boundary, `lambda > 0`.
pub fn dirichlet_log_det(lambda: f64, z_g0: f64, topology: &SurfaceTopology, boundary_length: f64) -> Result<f64> {
    topology.require_negative()?;
    positive("Z_G0(lambda)", z_g0)?;
    positive("boundary length", boundary_length)?;
    positive("lambda", lambda)?;
    let chi = topology.chi();
    let l = Complex64::new(lambda, 0.0);
    let inner = eta_constant() - boundary_length * (1.0 - 2.0 * lambda) / (8.0 * chi)
        + lambda * (1.0 - lambda)
        + (lambda - 1.0) * LN_2PI
        - 2.0 * log_barnes_g(l)?.re()
        - log_gamma(l)?.re();
    Ok(z_g0.ln() - chi * inner)
}

/// The same at `lambda = 1`, simplified with `G(1) = Gamma(1) = 1`:
/// `log Z_G0(1) - chi eta - l / 8`.
pub fn dirichlet_log_det_at_one(z_g0_at_1: f64, topology: &SurfaceTopology, boundary_length: f64) -> Result<f64> {
    topology.require_negative()?;
    positive("Z_G0(1)", z_g0_at_1)?;
    positive("boundary length", boundary_length)?;
    Ok(z_g0_at_1.ln() - topology.chi() * eta_constant() - boundary_length / 8.0)
}

pub fn dirichlet_det(lambda: f64, z_g0: f64, topology: &SurfaceTopology, boundary_length: f64) -> Result<f64> {
    dirichlet_log_det(lambda, z_g0, topology, boundary_length).map(f64::exp)
}

/// Constants of the form
/// `det(Delta - l(1-l)) = Z_G0(l) e^{-L l/4 + C l(1-l) + D} (G(l)^{-2} (2 pi)^l / Gamma(l))^{-chi}`:
/// `C = -chi`, `D = chi(ln(2 pi)/2 - 2 zeta'(-1) + 1/4) + L/8`.
pub fn cd_constants(topology: &SurfaceTopology, boundary_length: f64) -> Result<(f64, f64)> {
    let chi = topology.chi();
    let zp = zeta_derivative(Complex64::new(-1.0, 0.0))?.re();
    Ok((-chi, chi * (0.5 * LN_2PI - 2.0 * zp + 0.25) + boundary_length / 8.0))
}

/// `det' N / l` for `chi < 0` from `Z'_G(1)` and `Z_G0(1)`.
///
/// The report's `value` composes the doubling formula
/// `det' Delta_M / det(Delta_X)^2 = vol(M) det' N / (2 l)` with the closed
/// and Dirichlet determinants; `cross_check` is the closed form
/// `-Z'_G(1) e^{l/4} / (Z_G0(1)^2 2 pi chi)`.
pub fn theorem4_pipeline(
    zg_prime_at_1: f64,
    z_g0_at_1: f64,
    topology: &SurfaceTopology,
    boundary_length: f64,
) -> Result<DetReport> {
    topology.require_negative()?;
    positive("Z'_G(1)", zg_prime_at_1)?;
    positive("Z_G0(1)", z_g0_at_1)?;
    positive("boundary length", boundary_length)?;
    let chi = topology.chi();
    let log_closed = sarnak_log_det(zg_prime_at_1, topology)?;
    let log_dirichlet = dirichlet_log_det(1.0, z_g0_at_1, topology, boundary_length)?;
    let volume = 2.0 * zero_volume(topology);
    let log_det_n = log_closed - 2.0 * log_dirichlet + (2.0 * boundary_length).ln() - volume.ln();
    let composed = (log_det_n - boundary_length.ln()).exp();
    let closed = (zg_prime_at_1.ln() + boundary_length / 4.0 - 2.0 * z_g0_at_1.ln() - (-2.0 * PI * chi).ln()).exp();
    let scale = log_closed.abs() + 2.0 * log_dirichlet.abs() + boundary_length;
    let mut r = DetReport::new(composed, Method::Theorem4Pipeline, 8.0 * f64::EPSILON * scale * composed)
        .input("zg_prime_1", zg_prime_at_1)
        .input("zg0_1", z_g0_at_1)
        .input("chi", chi)
        .input("ell", boundary_length)
        .with_metric(composed * boundary_length, boundary_length);
    r.cross_check = Some(closed);
    Ok(r)
}

/// Right side of
/// `[lambda^{chi-1} R_Gamma(lambda)]_{lambda=0} = -(Z'_G(1)/Z_G0(1)^2) e^{l/4} (2 pi)^{-chi}`.
pub fn length_spectrum_rhs(
    zg_prime_at_1: f64,
    z_g0_at_1: f64,
    topology: &SurfaceTopology,
    boundary_length: f64,
) -> Result<f64> {
    positive("Z'_G(1)", zg_prime_at_1)?;
    positive("Z_G0(1)", z_g0_at_1)?;
    positive("boundary length", boundary_length)?;
    Ok(-(zg_prime_at_1.ln() - 2.0 * z_g0_at_1.ln() + boundary_length / 4.0 - topology.chi() * LN_2PI).exp())
}

/// `|lhs - rhs|` for an externally computed left side.
pub fn length_spectrum_relation(
    supplied_r_limit: f64,
    zg_prime_at_1: f64,
    z_g0_at_1: f64,
    topology: &SurfaceTopology,
    boundary_length: f64,
) -> Result<f64> {
    Ok((supplied_r_limit - length_spectrum_rhs(zg_prime_at_1, z_g0_at_1, topology, boundary_length)?).abs())
}
