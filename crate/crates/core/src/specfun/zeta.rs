//! Riemann zeta and its derivative by Euler-Maclaurin summation,
//!
//! zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
//!           + sum_{k=1}^{M} B_2k/(2k)! (s)_(2k-1) N^(-s-2k+1),
//!
//! differentiated term by term for zeta'(s).
//!
//! Left of Re s = -1/2, zeta is obtained from the reflection formula. The
//! derivative is always summed directly; its rounding error grows like
//! N^(1 - Re s), and the documented accuracy holds for Re s >= -3/2.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::gamma::log_gamma;
use super::{ComplexSum, EvalResult};
use crate::error::{Error, Result};

/// Truncation parameters of the Euler-Maclaurin sum: the direct sum runs to
/// `N = n_base + ceil(|s|)` and `m` correction terms are used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmParams {
    pub n_base: usize,
    pub m: usize,
}

impl Default for EmParams {
    fn default() -> Self {
        Self { n_base: 12, m: 20 }
    }
}

impl EmParams {
    /// A second, independent truncation used to cross-check results.
    pub fn refined() -> Self {
        Self { n_base: 20, m: 30 }
    }
}

const MAX_M: usize = 30;

/// B_2k / (2k)! for k = 1..=MAX_M.
fn bernoulli_ratios() -> &'static [f64; MAX_M] {
    static TABLE: OnceLock<[f64; MAX_M]> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_2k/(2k)! = (-1)^(k+1) 2 zeta(2k) / (2 pi)^(2k)
        let mut t = [0.0; MAX_M];
        t[0] = 1.0 / 12.0;
        t[1] = -1.0 / 720.0;
        t[2] = 1.0 / 30240.0;
        for (i, slot) in t.iter_mut().enumerate().skip(3) {
            let k = i + 1;
            let p = 2 * k as i32;
            let mut z = 0.0;
            for n in (1..=2000).rev() {
                z += (n as f64).powi(-p);
            }
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * z / (2.0 * PI).powi(p);
        }
        t
    })
}

fn check_pole(s: Complex64, name: &'static str) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain { function: name, detail: format!("non-finite argument {s}") });
    }
    if (s - 1.0).norm() < 1e-12 {
        return Err(Error::Pole { function: name, at: "1".into() });
    }
    Ok(())
}

fn em(s: Complex64, params: EmParams, derivative: bool) -> (Complex64, f64) {
    let m = params.m.min(MAX_M);
    let n_cut = params.n_base + s.norm().ceil() as usize;
    let nf = n_cut as f64;
    let ln_n = nf.ln();
    let mut acc = ComplexSum::new();
    for n in (1..n_cut).rev() {
        let ln = (n as f64).ln();
        let t = (-s * ln).exp();
        acc.add(if derivative { -t * ln } else { t });
    }
    let n_pow = (-s * ln_n).exp(); // N^-s
    let sm1 = s - 1.0;
    if derivative {
        acc.add(-n_pow * nf * ln_n / sm1 - n_pow * nf / (sm1 * sm1));
        acc.add(-n_pow * ln_n * 0.5);
    } else {
        acc.add(n_pow * nf / sm1);
        acc.add(n_pow * 0.5);
    }
    // Rising factorial P = (s)(s+1)...(s+2k-2) and its s-derivative.
    let mut p = s;
    let mut dp = Complex64::new(1.0, 0.0);
    let mut npow = n_pow / nf; // N^(-s-1)
    let inv_n2 = 1.0 / (nf * nf);
    let mut last = 0.0;
    for (k, &b) in bernoulli_ratios().iter().enumerate().take(m) {
        if k > 0 {
            for j in [2 * k - 1, 2 * k] {
                dp = dp * (s + j as f64) + p;
                p *= s + j as f64;
            }
        }
        let t = if derivative { (dp - p * ln_n) * npow * b } else { p * npow * b };
        acc.add(t);
        last = t.norm();
        npow *= inv_n2;
    }
    let value = acc.value();
    // The Euler-Maclaurin terms first shrink then grow; the last one bounds the remainder.
    let err = last + 8.0 * f64::EPSILON * acc.magnitude();
    (value, err)
}

/// Number of entries in [`zeta_at_integers`].
pub(crate) const ZETA_TABLE_LEN: usize = 64;

/// `zeta(k)` for `k = 2..ZETA_TABLE_LEN + 2`, used by Taylor expansions about 1.
pub(crate) fn zeta_at_integers() -> &'static [f64; ZETA_TABLE_LEN] {
    static TABLE: OnceLock<[f64; ZETA_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; ZETA_TABLE_LEN];
        for (i, slot) in t.iter_mut().enumerate() {
            *slot = em(Complex64::new((i + 2) as f64, 0.0), EmParams::default(), false).0.re;
        }
        t
    })
}

/// zeta(s) for s != 1.
pub fn riemann_zeta(s: Complex64) -> Result<EvalResult> {
    check_pole(s, "zeta")?;
    if s.re < -0.5 {
        return reflected(s);
    }
    let (v, e) = em(s, EmParams::default(), false);
    Ok(EvalResult::new(v, e))
}

/// zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s), used on the left
/// where direct summation cancels badly.
fn reflected(s: Complex64) -> Result<EvalResult> {
    let one_minus = Complex64::new(1.0, 0.0) - s;
    let (z1, e1) = em(one_minus, EmParams::default(), false);
    let lg = log_gamma(one_minus)?;
    let log_pref = s * 2f64.ln() + (s - 1.0) * PI.ln() + lg.value;
    let scale = log_pref.exp();
    let pref = scale * (s * (PI / 2.0)).sin();
    let v = pref * z1;
    // the sine is only known to absolute accuracy eps |s| near the trivial zeros
    let sine_err = 4.0 * f64::EPSILON * (1.0 + s.norm()) * scale.norm() * z1.norm();
    let e = pref.norm() * (e1 + z1.norm() * lg.abs_error_estimate) + 8.0 * f64::EPSILON * v.norm() + sine_err;
    Ok(EvalResult::new(v, e))
}

/// zeta'(s) for s != 1.
pub fn zeta_derivative(s: Complex64) -> Result<EvalResult> {
    zeta_derivative_with(s, EmParams::default())
}

/// zeta'(s) with explicit truncation parameters.
pub fn zeta_derivative_with(s: Complex64, params: EmParams) -> Result<EvalResult> {
    check_pole(s, "zeta'")?;
    let (v, e) = em(s, params, true);
    Ok(EvalResult::new(v, e))
}

/// eta = 2 zeta'(-1) - 1/4 + ln(2 pi)/2.
pub fn eta_constant() -> f64 {
    eta_constant_with(EmParams::default())
}

pub fn eta_constant_with(params: EmParams) -> f64 {
    let zp = zeta_derivative_with(Complex64::new(-1.0, 0.0), params).expect("s = -1 is regular").value.re;
    2.0 * zp - 0.25 + 0.5 * (2.0 * PI).ln()
}
