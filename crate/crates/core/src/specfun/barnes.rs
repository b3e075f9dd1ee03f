//! Barnes G via its large-argument expansion plus downward recurrence
//! `G(z) = G(z + m) / prod_{k<m} Gamma(z + k)`.
//!
//! The additive constant of the expansion is not tabulated: it is fixed once
//! by the normalization G(1) = 1 (it equals zeta'(-1), which the tests check
//! against the zeta module).

use std::sync::OnceLock;

use num_complex::Complex64;

use super::gamma::{log_gamma, zeta_series, EULER_GAMMA, TAYLOR_RADIUS};
use super::{nearest_nonpositive_integer, CompensatedSum, ComplexSum, EvalResult};
use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Arguments are shifted until Re(w) >= this before the expansion is used.
const SHIFT_TARGET: f64 = 10.0;

/// B_{2k+2} / (4 k (k+1)), k = 1..8.
const COEFFS: [f64; 8] = [
    (-1.0 / 30.0) / 8.0,
    (1.0 / 42.0) / 24.0,
    (-1.0 / 30.0) / 48.0,
    (5.0 / 66.0) / 80.0,
    (-691.0 / 2730.0) / 120.0,
    (7.0 / 6.0) / 168.0,
    (-3617.0 / 510.0) / 224.0,
    (43867.0 / 798.0) / 288.0,
];

/// `ln G(w + 1)` without the additive constant.
fn expansion(w: Complex64) -> (Complex64, f64) {
    let lnw = w.ln();
    let w2 = w * w;
    let mut acc = ComplexSum::new();
    acc.add((w2 * 0.5 - 1.0 / 12.0) * lnw);
    acc.add(-w2 * 0.75);
    acc.add(w * (0.5 * LN_2PI));
    let inv2 = w2.inv();
    let mut pow = inv2;
    let mut last = 0.0;
    for c in COEFFS {
        let t = pow * c;
        acc.add(t);
        last = t.norm();
        pow *= inv2;
    }
    (acc.value(), last * inv2.norm() * 10.0 + f64::EPSILON * acc.magnitude())
}

/// The additive constant of the expansion, fixed by G(1) = 1.
///
/// With N = 12, G(N + 1) = prod_{j<N} j!, which is formed in floating point
/// (a handful of roundings) before taking the logarithm.
pub fn barnes_constant() -> f64 {
    static CONSTANT: OnceLock<f64> = OnceLock::new();
    *CONSTANT.get_or_init(|| {
        const N: usize = 12;
        let mut fact = 1.0f64;
        let mut superfact = 1.0f64;
        for j in 1..N {
            fact *= j as f64;
            superfact *= fact;
        }
        let (asym, _) = expansion(Complex64::new(N as f64, 0.0));
        let mut total = CompensatedSum::new();
        total.add(superfact.ln());
        total.add(-asym.re);
        total.value()
    })
}

/// `ln G(1 + z) = z (ln(2 pi) - 1)/2 - (1 + gamma) z^2 / 2
///               + sum_{k>=2} (-1)^k zeta(k) z^(k+1) / (k+1)`.
fn taylor(z: Complex64) -> (Complex64, f64) {
    let (s, e) = zeta_series(z, 1);
    let v = s + z * (0.5 * (LN_2PI - 1.0)) - z * z * (0.5 * (1.0 + EULER_GAMMA));
    (v, e + 2.0 * f64::EPSILON * v.norm())
}

/// Principal-branch `ln G(z)`.
///
/// G has zeros at `0, -1, -2, ...`; those are reported as
/// [`Error::ZeroOfBarnesG`].
pub fn log_barnes_g(z: Complex64) -> Result<EvalResult> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain { function: "log_barnes_g", detail: format!("non-finite argument {z}") });
    }
    if let Some(n) = nearest_nonpositive_integer(z, 1e-12) {
        return Err(Error::ZeroOfBarnesG(n));
    }
    if (z - 1.0).norm() <= TAYLOR_RADIUS {
        let (v, e) = taylor(z - 1.0);
        return Ok(EvalResult::new(v, e));
    }
    if (z - 2.0).norm() <= TAYLOR_RADIUS {
        // G(z) = Gamma(z - 1) G(z - 1)
        let (v, e) = taylor(z - 2.0);
        let lg = log_gamma(z - 1.0)?;
        return Ok(EvalResult::new(v + lg.value, e + lg.abs_error_estimate));
    }
    let shift = if z.re < SHIFT_TARGET + 1.0 { (SHIFT_TARGET + 1.0 - z.re).ceil() as usize } else { 0 };
    // ln G(z) = ln G(w + 1) - sum_{k<shift} ln Gamma(z + k), w = z + shift - 1
    let w = z + (shift as f64 - 1.0);
    let (asym, asym_err) = expansion(w);
    let mut acc = ComplexSum::new();
    acc.add(asym);
    acc.add(Complex64::new(barnes_constant(), 0.0));
    let mut err = asym_err;
    if shift > 0 {
        let lg = log_gamma(z)?;
        err += shift as f64 * lg.abs_error_estimate;
        let mut lg_k = lg.value;
        let mut zk = z;
        for _ in 0..shift {
            acc.add(-lg_k);
            lg_k += zk.ln();
            zk += 1.0;
        }
    }
    let value = acc.value();
    err += 4.0 * f64::EPSILON * acc.magnitude();
    Ok(EvalResult::new(value, err))
}
