use num_complex::Complex64;

use super::zeta::zeta_at_integers;
use super::{nearest_nonpositive_integer, ComplexSum, EvalResult};
use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Stirling series coefficients B_{2k} / (2k (2k - 1)), k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Arguments are shifted until the real part reaches this value before the
/// Stirling series is applied.
const SHIFT_TARGET: f64 = 15.0;

pub(crate) const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Radius around 1 (and 2) inside which the Taylor series are used.
pub(crate) const TAYLOR_RADIUS: f64 = 0.5;

/// Sums `sum_k (-1)^k zeta(k) z^(k + offset) / (k + offset)` over `k >= 2`
/// for `|z| <= 1/2`, with its rounding and truncation estimate.
pub(crate) fn zeta_series(z: Complex64, offset: usize) -> (Complex64, f64) {
    let mut acc = ComplexSum::new();
    let mut pow = z.powu(2 + offset as u32);
    let mut sign = 1.0;
    for (i, &zk) in zeta_at_integers().iter().enumerate() {
        let k = (i + 2 + offset) as f64;
        acc.add(pow * (sign * zk / k));
        pow *= z;
        sign = -sign;
    }
    // remaining terms are below |z|^66 / (1 - |z|) <= 2^-65
    (acc.value(), 4.0 * f64::EPSILON * acc.magnitude() + 2.0 * pow.norm())
}

/// `ln Gamma(1 + z) = -gamma z + sum_{k>=2} (-1)^k zeta(k) z^k / k`.
fn log_gamma_taylor(z: Complex64) -> (Complex64, f64) {
    let (s, e) = zeta_series(z, 0);
    let v = s - z * EULER_GAMMA;
    (v, e + f64::EPSILON * v.norm())
}

/// Largest |Re z| for which the error estimate meets the documented bound.
const DOCUMENTED_RE: f64 = 1000.0;

pub(crate) fn stirling(w: Complex64) -> (Complex64, f64) {
    let lnw = w.ln();
    let mut acc = ComplexSum::new();
    acc.add((w - 0.5) * lnw);
    acc.add(-w);
    acc.add(Complex64::new(LN_SQRT_2PI, 0.0));
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut last = 0.0;
    for c in STIRLING {
        let t = pow * c;
        acc.add(t);
        last = t.norm();
        pow *= inv2;
    }
    let err = last * inv2.norm() * 10.0 + f64::EPSILON * acc.magnitude();
    (acc.value(), err)
}

/// Principal-branch `ln Gamma(z)`.
///
/// Poles at `0, -1, -2, ...` (within 1e-12) are reported as errors.
pub fn log_gamma(z: Complex64) -> Result<EvalResult> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain { function: "log_gamma", detail: format!("non-finite argument {z}") });
    }
    if let Some(n) = nearest_nonpositive_integer(z, 1e-12) {
        return Err(Error::Pole { function: "Gamma", at: n.to_string() });
    }
    // Near 1 and 2 the Taylor series avoids the cancellation of the shifted Stirling sum.
    if (z - 1.0).norm() <= TAYLOR_RADIUS {
        let (v, e) = log_gamma_taylor(z - 1.0);
        return Ok(EvalResult::new(v, e));
    }
    if (z - 2.0).norm() <= TAYLOR_RADIUS {
        let (v, e) = log_gamma_taylor(z - 2.0);
        let w = v + (z - 1.0).ln();
        return Ok(EvalResult::new(w, e + 2.0 * f64::EPSILON * w.norm().max(1.0)));
    }
    let shift = if z.re < SHIFT_TARGET { (SHIFT_TARGET - z.re).ceil() as usize } else { 0 };
    let (head, stirling_err) = stirling(z + shift as f64);
    let mut acc = ComplexSum::new();
    acc.add(head);
    let mut zk = z;
    for _ in 0..shift {
        acc.add(-zk.ln());
        zk += 1.0;
    }
    let value = acc.value();
    let mut err = stirling_err + 4.0 * f64::EPSILON * acc.magnitude();
    if z.re.abs() > DOCUMENTED_RE {
        err = err.max(1e-12 * value.norm().max(1.0));
    }
    Ok(EvalResult::new(value, err))
}

/// `ln |Gamma(x)|` and the sign of `Gamma(x)` for real `x`.
pub fn log_gamma_real(x: f64) -> Result<(f64, f64)> {
    let r = log_gamma(Complex64::new(x, 0.0))?;
    // On the negative axis the imaginary part is k*pi with k the number of
    // negative factors in the shift; its parity gives the sign.
    let k = (r.value.im / std::f64::consts::PI).round() as i64;
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok((r.value.re, sign))
}

/// `1 / Gamma(z)`, an entire function: exactly zero at the poles of Gamma.
pub fn reciprocal_gamma(z: Complex64) -> Complex64 {
    match log_gamma(z) {
        Ok(r) => (-r.value).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}
