//! Gauss hypergeometric function.
//!
//! Covered domain:
//! - terminating series (a or b a nonpositive integer): all z;
//! - |z| <= 0.9: Gauss series;
//! - |z/(z-1)| <= 0.9: Pfaff transformation, which covers real z in [-9, 0];
//! - |z| >= 1.12 with b - a not an integer: the 1/z connection formula,
//!   which covers real z <= -1.12;
//! - when b - a is an integer, the Pfaff series is pushed to |z/(z-1)| <= 0.995
//!   (real z >= -199).
//!
//! Anything else is reported as a domain error.

use num_complex::Complex64;

use super::gamma::reciprocal_gamma;
use super::{log_gamma, nearest_nonpositive_integer, ComplexSum, EvalResult};
use crate::error::{Error, Result};

const MAX_TERMS: usize = 20_000;

fn series(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<(Complex64, f64)> {
    let mut acc = ComplexSum::new();
    let mut term = Complex64::new(1.0, 0.0);
    acc.add(term);
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        acc.add(term);
        if term.norm() == 0.0 {
            return Ok((acc.value(), 4.0 * f64::EPSILON * acc.magnitude()));
        }
        let sum = acc.value();
        if n > 2 && term.norm() <= 1e-17 * sum.norm().max(1e-300) {
            // Geometric tail bound with ratio about |z|.
            let tail = term.norm() * z.norm() / (1.0 - z.norm()).max(1e-3);
            return Ok((sum, tail + 4.0 * f64::EPSILON * acc.magnitude()));
        }
    }
    Err(Error::Domain { function: "hyp2f1", detail: format!("series did not converge at z = {z}") })
}

fn is_nonpositive_integer(x: Complex64) -> bool {
    nearest_nonpositive_integer(x, 1e-14).is_some()
}

fn is_integer(x: Complex64) -> bool {
    x.im.abs() < 1e-14 && (x.re - x.re.round()).abs() < 1e-14
}

/// Gauss 2F1(a, b; c; z) on the domain described in the module docs.
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<EvalResult> {
    if is_nonpositive_integer(c) {
        return Err(Error::Pole { function: "2F1", at: format!("c = {c}") });
    }
    if z.norm() == 0.0 {
        return Ok(EvalResult::new(Complex64::new(1.0, 0.0), 0.0));
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        let (v, e) = series(a, b, c, z)?;
        return Ok(EvalResult::new(v, e));
    }
    if z.norm() <= 0.9 {
        let (v, e) = series(a, b, c, z)?;
        return Ok(EvalResult::new(v, e));
    }
    let one = Complex64::new(1.0, 0.0);
    let w = z / (z - one);
    let integer_gap = is_integer(b - a);
    let pfaff_limit = if integer_gap { 0.995 } else { 0.9 };
    if w.norm() <= pfaff_limit {
        // F(a,b;c;z) = (1-z)^-a F(a, c-b; c; z/(z-1))
        let (v, e) = series(a, c - b, c, w)?;
        let pref = (-a * (one - z).ln()).exp();
        return Ok(EvalResult::new(pref * v, pref.norm() * e + 4.0 * f64::EPSILON * (pref * v).norm()));
    }
    if z.norm() >= 1.12 && !integer_gap {
        return inversion(a, b, c, z);
    }
    Err(Error::Domain { function: "hyp2f1", detail: format!("z = {z} with a = {a}, b = {b}, c = {c}") })
}

/// 1/z connection formula, valid for b - a not an integer.
fn inversion(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<EvalResult> {
    let one = Complex64::new(1.0, 0.0);
    let zi = z.inv();
    let log_mz = (-z).ln();
    let lgc = log_gamma(c)?;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (p, q) in [(a, b), (b, a)] {
        // Gamma(c) Gamma(q-p) / (Gamma(q) Gamma(c-p)) (-z)^-p F(p, p-c+1; p-q+1; 1/z)
        let rg = reciprocal_gamma(q) * reciprocal_gamma(c - p);
        if rg.norm() == 0.0 {
            continue;
        }
        let lg_gap = log_gamma(q - p)?;
        let pref = (lgc.value + lg_gap.value - p * log_mz).exp() * rg;
        let (f, e) = series(p, p - c + one, p - q + one, zi)?;
        let t = pref * f;
        total += t;
        err += pref.norm() * e + t.norm() * (lgc.abs_error_estimate + lg_gap.abs_error_estimate + 8.0 * f64::EPSILON);
    }
    Ok(EvalResult::new(total, err))
}
