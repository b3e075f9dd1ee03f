//! Zeta-regularized determinants of sequences `u_n = c n^k (1 + eps_n)`,
//! `n >= 1`, each repeated `tail_multiplicity` times, together with finitely
//! many extra "head" eigenvalues.
//!
//! With `eps_n = O(e^{-a n})` the zeta function
//! `zeta_u(s) = sum_n u_n^{-s}` continues to s = 0 with
//!
//! ```text
//! zeta_u(0)   = zeta(0)
//! zeta_u'(0)  = k zeta'(0) - ln(c) zeta(0) - sum_n ln(1 + eps_n)
//! ```
//!
//! The prefactor term follows from `u_n^{-s} = c^{-s} (n^k (1 + eps_n))^{-s}`:
//! differentiating `c^{-s} f(s)` at 0 gives `f'(0) - ln(c) f(0)` and
//! `f(0) = zeta(0)`.
//!
//! Head eigenvalues add `m` to `zeta_u(0)` and `-m ln(lambda)` to
//! `zeta_u'(0)`. The log-determinant is `-zeta_u'(0)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{riemann_zeta, zeta_derivative, CompensatedSum};

/// Target size of the neglected tail when the truncation point is chosen
/// automatically.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-14;

/// Exponential bound `|eps_n| <= constant * exp(-rate * n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayBound {
    pub constant: f64,
    pub rate: f64,
}

impl DecayBound {
    pub fn new(constant: f64, rate: f64) -> Self {
        Self { constant, rate }
    }

    /// No corrections at all.
    pub fn zero() -> Self {
        Self { constant: 0.0, rate: 1.0 }
    }

    pub fn at(&self, n: usize) -> f64 {
        self.constant * (-self.rate * n as f64).exp()
    }

    /// `sum_{n > big_n} constant e^{-rate n}`.
    pub fn tail_after(&self, big_n: usize) -> f64 {
        self.at(big_n + 1) / (-(-self.rate).exp_m1())
    }

    /// Smallest N whose tail is below `tol`.
    pub fn cutoff(&self, tol: f64) -> usize {
        if self.constant == 0.0 {
            return 0;
        }
        let q = -(-self.rate).exp_m1();
        // constant e^{-a N} / (1 - e^{-a}) < tol
        let n = ((self.constant / (q * tol)).ln() / self.rate).floor().max(0.0) as usize;
        let mut n = n.saturating_sub(1);
        while self.at(n) / q >= tol {
            n += 1;
        }
        n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeadEigenvalue {
    pub value: f64,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSequence {
    power: f64,
    prefactor: f64,
    corrections: Vec<f64>,
    bound: DecayBound,
    head: Vec<HeadEigenvalue>,
    tail_multiplicity: u32,
    /// Bound on `sum_{n > corrections.len()} |ln(1 + eps_n)|` per copy.
    tail_log_bound: f64,
}

impl EigenSequence {
    /// Builds a sequence from explicitly supplied corrections `eps_1..eps_N`.
    /// Terms past the list are treated as zero and accounted for by `bound`.
    pub fn new(
        power: f64,
        prefactor: f64,
        corrections: Vec<f64>,
        bound: DecayBound,
        head: Vec<HeadEigenvalue>,
        tail_multiplicity: u32,
    ) -> Result<Self> {
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::InvalidSequence(format!("power k must be positive, got {power}")));
        }
        if !(prefactor.is_finite() && prefactor > 0.0) {
            return Err(Error::InvalidSequence(format!("prefactor must be positive, got {prefactor}")));
        }
        if !(bound.constant.is_finite() && bound.constant >= 0.0 && bound.rate.is_finite() && bound.rate > 0.0) {
            return Err(Error::InvalidSequence(format!("bad decay bound {bound:?}")));
        }
        if tail_multiplicity == 0 {
            return Err(Error::InvalidSequence("tail multiplicity must be positive".into()));
        }
        for h in &head {
            if !(h.value.is_finite() && h.value > 0.0) {
                return Err(Error::InvalidSequence(format!("head eigenvalue {} is not positive", h.value)));
            }
            if h.multiplicity == 0 {
                return Err(Error::InvalidSequence("head multiplicity must be positive".into()));
            }
        }
        for (i, &e) in corrections.iter().enumerate() {
            let n = i + 1;
            if !(e.is_finite() && 1.0 + e > 0.0) {
                return Err(Error::InvalidSequence(format!("1 + eps_{n} = {} is not positive", 1.0 + e)));
            }
            let b = bound.at(n);
            if e.abs() > b * (1.0 + 1e-12) + 1e-300 {
                return Err(Error::InvalidSequence(format!("|eps_{n}| = {} exceeds the declared bound {b}", e.abs())));
            }
        }
        let big_n = corrections.len();
        let first_missing = bound.at(big_n + 1);
        if first_missing >= 0.5 {
            return Err(Error::InvalidSequence(format!(
                "corrections stop at n = {big_n} while the bound is still {first_missing}"
            )));
        }
        // |ln(1 + x)| <= |x| / (1 - |x|)
        let tail_log_bound = bound.tail_after(big_n) / (1.0 - first_missing);
        Ok(Self { power, prefactor, corrections, bound, head, tail_multiplicity, tail_log_bound })
    }

    /// Builds a sequence sampling `eps(n)` up to the automatic cutoff for
    /// [`DEFAULT_TAIL_TOLERANCE`].
    pub fn from_fn(
        power: f64,
        prefactor: f64,
        eps: impl Fn(usize) -> f64,
        bound: DecayBound,
        head: Vec<HeadEigenvalue>,
        tail_multiplicity: u32,
    ) -> Result<Self> {
        let n = bound.cutoff(DEFAULT_TAIL_TOLERANCE);
        let corrections = (1..=n).map(eps).collect();
        Self::new(power, prefactor, corrections, bound, head, tail_multiplicity)
    }

    /// `c n^k`, no corrections, no head.
    pub fn pure(power: f64, prefactor: f64, tail_multiplicity: u32) -> Result<Self> {
        Self::new(power, prefactor, Vec::new(), DecayBound::zero(), Vec::new(), tail_multiplicity)
    }

    pub fn with_head(mut self, head: Vec<HeadEigenvalue>) -> Result<Self> {
        let mut all = std::mem::take(&mut self.head);
        all.extend(head);
        Self::new(self.power, self.prefactor, self.corrections, self.bound, all, self.tail_multiplicity)
            .map(|s| Self { tail_log_bound: self.tail_log_bound.max(s.tail_log_bound), ..s })
    }

    pub fn power(&self) -> f64 {
        self.power
    }
    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }
    pub fn corrections(&self) -> &[f64] {
        &self.corrections
    }
    pub fn bound(&self) -> DecayBound {
        self.bound
    }
    pub fn head(&self) -> &[HeadEigenvalue] {
        &self.head
    }
    pub fn tail_multiplicity(&self) -> u32 {
        self.tail_multiplicity
    }
    pub fn n_tail(&self) -> usize {
        self.corrections.len()
    }

    /// The n-th tail eigenvalue `c n^k (1 + eps_n)`.
    pub fn eigenvalue(&self, n: usize) -> f64 {
        let e = self.corrections.get(n - 1).copied().unwrap_or(0.0);
        self.prefactor * (n as f64).powf(self.power) * (1.0 + e)
    }

    /// Every eigenvalue multiplied by `t > 0`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidSequence(format!("scale factor must be positive, got {t}")));
        }
        let mut s = self.clone();
        s.prefactor *= t;
        for h in &mut s.head {
            h.value *= t;
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizedDet {
    /// `ln det = -zeta_u'(0)`.
    pub log_value: f64,
    pub zeta_at_zero: f64,
    pub truncation_error: f64,
}

impl RegularizedDet {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

fn zeta0() -> f64 {
    riemann_zeta(Complex64::new(0.0, 0.0)).expect("regular point").re()
}

fn zeta0_prime() -> f64 {
    zeta_derivative(Complex64::new(0.0, 0.0)).expect("regular point").re()
}

pub fn zeta_at_zero(seq: &EigenSequence) -> f64 {
    let head: u64 = seq.head.iter().map(|h| h.multiplicity as u64).sum();
    seq.tail_multiplicity as f64 * zeta0() + head as f64
}

pub fn log_det(seq: &EigenSequence) -> RegularizedDet {
    let mut corr = CompensatedSum::new();
    for &e in seq.corrections.iter().rev() {
        corr.add(e.ln_1p());
    }
    let mut family = CompensatedSum::new();
    family.add(-seq.power * zeta0_prime());
    family.add(seq.prefactor.ln() * zeta0());
    family.add(corr.value());
    let m = seq.tail_multiplicity as f64;
    let mut total = CompensatedSum::new();
    total.add(m * family.value());
    for h in &seq.head {
        total.add(h.multiplicity as f64 * h.value.ln());
    }
    let rounding = 8.0 * f64::EPSILON * (m * (family.magnitude() + corr.magnitude()) + total.magnitude());
    RegularizedDet {
        log_value: total.value(),
        zeta_at_zero: zeta_at_zero(seq),
        truncation_error: m * seq.tail_log_bound + rounding,
    }
}

/// The termwise product `w_n = u_n v_n`; heads are concatenated so that
/// `log_det(w) = log_det(u) + log_det(v)`.
pub fn combine(u: &EigenSequence, v: &EigenSequence) -> Result<EigenSequence> {
    if u.tail_multiplicity != v.tail_multiplicity {
        return Err(Error::MultiplicityMismatch(u.tail_multiplicity, v.tail_multiplicity));
    }
    let len = u.corrections.len().max(v.corrections.len());
    let corrections = (0..len)
        .map(|i| {
            let a = u.corrections.get(i).copied().unwrap_or(0.0);
            let b = v.corrections.get(i).copied().unwrap_or(0.0);
            a + b + a * b
        })
        .collect();
    let rate = u.bound.rate.min(v.bound.rate);
    let bound = DecayBound::new(
        u.bound.constant + v.bound.constant + u.bound.constant * v.bound.constant * (-rate).exp(),
        rate,
    );
    let mut head = u.head.clone();
    head.extend_from_slice(&v.head);
    let mut w = EigenSequence::new(
        u.power + v.power,
        u.prefactor * v.prefactor,
        corrections,
        bound,
        head,
        u.tail_multiplicity,
    )?;
    // Neglected terms of w are exactly the neglected terms of u and v.
    w.tail_log_bound = u.tail_log_bound + v.tail_log_bound;
    Ok(w)
}
