//! Special-function kernel: log-Gamma, Barnes G, Riemann zeta and its
//! derivative, Gauss 2F1, and the constant
//! `eta = 2 zeta'(-1) - 1/4 + ln(2 pi)/2` that appears in closed-surface
//! determinant formulas.
//!
//! Everything runs in double precision with compensated (Neumaier) summation.
//! Complex logarithms use the branch that is analytic on `C \ (-inf, 0]` and
//! real on the positive axis; on the cut itself the limit from the upper
//! half-plane is returned, so exponentiated results are always correct.

mod barnes;
mod gamma;
mod hyp2f1;
mod zeta;

pub use barnes::{barnes_constant, log_barnes_g};
pub use gamma::{log_gamma, log_gamma_real, reciprocal_gamma};
pub use hyp2f1::hyp2f1;
pub use zeta::{eta_constant, eta_constant_with, riemann_zeta, zeta_derivative, zeta_derivative_with, EmParams};

use num_complex::Complex64;
use serde::Serialize;

/// A function value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
}

impl EvalResult {
    pub(crate) fn new(value: Complex64, abs_error_estimate: f64) -> Self {
        debug_assert!(abs_error_estimate.is_finite() && abs_error_estimate >= 0.0);
        Self { value, abs_error_estimate }
    }

    /// Real part, for callers that evaluate on the real axis.
    pub fn re(&self) -> f64 {
        self.value.re
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Sum of absolute values of everything added; scales the rounding error.
    pub fn magnitude(&self) -> f64 {
        self.abs
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated accumulator for complex values (independent real/imag parts).
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn magnitude(&self) -> f64 {
        self.re.magnitude() + self.im.magnitude()
    }
}

/// `ln(1 + x)` for complex `x`, accurate when `|x|` is small.
pub fn ln_1p(x: Complex64) -> Complex64 {
    if x.norm() < 1e-4 {
        // x - x^2/2 + x^3/3 - x^4/4 + x^5/5; remainder below 1e-20 |x|
        let x2 = x * x;
        x - x2 / 2.0 + x2 * x / 3.0 - x2 * x2 / 4.0 + x2 * x2 * x / 5.0
    } else {
        (Complex64::new(1.0, 0.0) + x).ln()
    }
}

pub(crate) fn nearest_nonpositive_integer(z: Complex64, tol: f64) -> Option<i64> {
    if z.re > 0.5 {
        return None;
    }
    let n = z.re.round();
    if (z - Complex64::new(n, 0.0)).norm() <= tol {
        Some(n as i64)
    } else {
        None
    }
}
