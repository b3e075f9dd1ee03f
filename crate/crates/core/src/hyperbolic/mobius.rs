use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the unit-determinant normalization and for the
/// hyperbolic/parabolic/elliptic classification.
pub const MOBIUS_TOLERANCE: f64 = 1e-12;

/// An element of PSL(2, R), stored as a representative with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusTransform {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MobiusTransform {
    /// Normalizes `[[a, b], [c, d]]` to unit determinant. The determinant must
    /// be positive.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let det = a * d - b * c;
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        if !(det > MOBIUS_TOLERANCE * scale * scale) {
            return Err(Error::InvalidMatrix(format!("determinant {det} is not positive")));
        }
        let s = det.sqrt();
        let m = Self { a: a / s, b: b / s, c: c / s, d: d / s };
        if (m.det() - 1.0).abs() > MOBIUS_TOLERANCE * (1.0 + m.norm_sq()) {
            return Err(Error::InvalidMatrix("normalization lost precision".into()));
        }
        Ok(m)
    }

    pub const fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// `z -> e^t z`.
    pub fn dilation(t: f64) -> Self {
        let h = (0.5 * t).exp();
        Self { a: h, b: 0.0, c: 0.0, d: 1.0 / h }
    }

    /// Hyperbolic element with translation length `t` whose axis is the
    /// geodesic from -1 to 1.
    pub fn unit_circle_translation(t: f64) -> Self {
        let (s, c) = ((0.5 * t).sinh(), (0.5 * t).cosh());
        Self { a: c, b: s, c: s, d: c }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    fn norm_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn compose(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0 + MOBIUS_TOLERANCE
    }

    /// Equality in PSL(2, R), i.e. up to an overall sign.
    pub fn approx_eq_projective(&self, o: &Self, tol: f64) -> bool {
        let scale = 1.0 + self.norm_sq().sqrt();
        let same = [(self.a - o.a), (self.b - o.b), (self.c - o.c), (self.d - o.d)];
        let flip = [(self.a + o.a), (self.b + o.b), (self.c + o.c), (self.d + o.d)];
        same.iter().all(|x| x.abs() <= tol * scale) || flip.iter().all(|x| x.abs() <= tol * scale)
    }

    /// Attracting and repelling fixed points on the real line (None stands for infinity).
    pub fn fixed_points(&self) -> Option<(Option<f64>, Option<f64>)> {
        if !self.is_hyperbolic() {
            return None;
        }
        let t = self.trace();
        let disc = (t * t - 4.0).sqrt();
        if self.c.abs() < MOBIUS_TOLERANCE {
            // axis through infinity: z -> (a z + b)/d
            let finite = self.b / (self.d - self.a);
            return Some(if self.a.abs() > self.d.abs() { (None, Some(finite)) } else { (Some(finite), None) });
        }
        let s = t.signum();
        let p = (self.a - self.d + s * disc) / (2.0 * self.c);
        let q = (self.a - self.d - s * disc) / (2.0 * self.c);
        Some((Some(p), Some(q)))
    }
}

/// `2 arccosh(|tr| / 2)`, the displacement along the axis.
pub fn translation_length(m: &MobiusTransform) -> Result<f64> {
    let t = m.trace().abs();
    if t <= 2.0 + MOBIUS_TOLERANCE {
        return Err(Error::NotHyperbolic { trace: t });
    }
    Ok(length_from_trace(t))
}

pub(crate) fn length_from_trace(t: f64) -> f64 {
    // 2 ln((t + sqrt(t^2 - 4)) / 2), written to avoid cancellation near t = 2
    let u = t - 2.0;
    2.0 * (0.5 * u + (0.25 * u * (u + 4.0)).sqrt()).ln_1p()
}
