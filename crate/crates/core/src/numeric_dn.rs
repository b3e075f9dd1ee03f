//! Fourier-truncated DN operators on the boundary circles of the disc and
//! the annulus, the conformal family `N_t = e^{-t w/2} N_0 e^{-t w/2}`, and
//! the derivative identity `d/dt log det' N_t = d/dt log l_t`.
//!
//! Each boundary circle of radius `r` carries the arc-length orthonormal
//! basis `1/sqrt(2 pi r), cos(j th)/sqrt(pi r), sin(j th)/sqrt(pi r)`,
//! `j = 1..K`. Multiplication by a function `f` is represented by collocation
//! at the `2K + 1` equispaced nodes, `M_f = U diag(f(th_j)) U^T` with `U` the
//! orthogonal real DFT. These matrices commute, satisfy `M_f M_g = M_{fg}`
//! exactly, and have trace `sum_j f(th_j)`, which vanishes for a zero-mean
//! trigonometric polynomial of degree at most `2K`. The Galerkin (Toeplitz)
//! truncation has none of these properties and leaves a `K`-independent
//! defect in the derivative identity.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dn_explicit::{annulus_block, AnnulusGeometry, Geometry};
use crate::error::{Error, Result};

/// Eigenvalues below this are treated as the kernel.
pub const KERNEL_THRESHOLD: f64 = 1e-9;

/// Largest allowed distance between the numerical kernel and the Fourier
/// coefficients of `e^{t w/2}`.
pub const KERNEL_TOLERANCE: f64 = 1e-8;

/// Nodes used for the reference quadratures on the circle.
const FINE_NODES: usize = 1024;

/// A real trigonometric polynomial `mean + sum_j cos[j-1] cos(j th) + sin[j-1] sin(j th)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformalFactor {
    pub mean: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl ConformalFactor {
    pub fn new(mean: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        let w = Self { mean, cos, sin };
        w.validate()?;
        Ok(w)
    }

    pub fn constant(c: f64) -> Self {
        Self { mean: c, cos: vec![], sin: vec![] }
    }

    /// Accepts either `{"mean": .., "cos": [..], "sin": [..]}` or a flat list
    /// `[mean, cos_1, sin_1, cos_2, sin_2, ..]`.
    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Form {
            Object(ConformalFactor),
            List(Vec<f64>),
        }
        let form: Form =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("conformal factor JSON: {e}")))?;
        let w = match form {
            Form::Object(w) => w,
            Form::List(v) => {
                let (&mean, rest) =
                    v.split_first().ok_or_else(|| Error::InvalidInput("empty coefficient list".into()))?;
                let cos = rest.iter().step_by(2).copied().collect();
                let sin = rest.iter().skip(1).step_by(2).copied().collect();
                Self { mean, cos, sin }
            }
        };
        w.validate()?;
        Ok(w)
    }

    fn validate(&self) -> Result<()> {
        if std::iter::once(&self.mean).chain(&self.cos).chain(&self.sin).all(|c| c.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidInput("conformal factor coefficients must be finite".into()))
        }
    }

    pub fn degree(&self) -> usize {
        let last = |v: &[f64]| v.iter().rposition(|&c| c != 0.0).map_or(0, |i| i + 1);
        last(&self.cos).max(last(&self.sin))
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut v = self.mean;
        for (j, c) in self.cos.iter().enumerate() {
            v += c * ((j + 1) as f64 * theta).cos();
        }
        for (j, s) in self.sin.iter().enumerate() {
            v += s * ((j + 1) as f64 * theta).sin();
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub k: usize,
    pub matrix: DMatrix<f64>,
    pub geometry: Geometry,
}

impl TruncatedOperator {
    /// Radii of the boundary circles, in block order.
    pub fn radii(&self) -> Vec<f64> {
        match self.geometry {
            Geometry::Disc { radius } => vec![radius],
            Geometry::Annulus { rho } => vec![rho, 1.0],
        }
    }

    fn block(&self) -> usize {
        2 * self.k + 1
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn symmetry_defect(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }
}

fn basis_index(mode: usize, sine: bool) -> usize {
    if mode == 0 {
        0
    } else if sine {
        2 * mode
    } else {
        2 * mode - 1
    }
}

/// The DN map restricted to modes `|n| <= K`.
pub fn build_dn_truncated(geometry: Geometry, k: usize) -> Result<TruncatedOperator> {
    if k == 0 {
        return Err(Error::InvalidInput("mode cutoff K must be at least 1".into()));
    }
    let b = 2 * k + 1;
    let matrix = match geometry {
        Geometry::Disc { radius } => {
            if !(radius.is_finite() && radius > 0.0) {
                return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
            }
            let mut m = DMatrix::zeros(b, b);
            for n in 1..=k {
                for sine in [false, true] {
                    let i = basis_index(n, sine);
                    m[(i, i)] = n as f64 / radius;
                }
            }
            m
        }
        Geometry::Annulus { rho } => {
            let geom = AnnulusGeometry::new(rho)?;
            let mut m = DMatrix::zeros(2 * b, 2 * b);
            for n in 0..=k {
                let s = annulus_block(&geom, n as i64).symmetrized();
                let sines: &[bool] = if n == 0 { &[false] } else { &[false, true] };
                for &sine in sines {
                    let i = basis_index(n, sine);
                    for (p, q) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                        m[(p * b + i, q * b + i)] = s[(p, q)];
                    }
                }
            }
            // exact symmetry; the two off-diagonal entries agree only to rounding
            (&m + m.transpose()) * 0.5
        }
    };
    Ok(TruncatedOperator { k, matrix, geometry })
}

/// Orthonormal real DFT on `2K + 1` nodes: row `i` is basis function `i`
/// (scaled to unit arc length) sampled at the nodes, times `sqrt(2 pi / N)`.
fn dft(k: usize) -> DMatrix<f64> {
    let n = 2 * k + 1;
    let scale = (2.0 * PI / n as f64).sqrt();
    DMatrix::from_fn(n, n, |i, j| {
        let th = 2.0 * PI * j as f64 / n as f64;
        let v = if i == 0 {
            1.0 / (2.0 * PI).sqrt()
        } else {
            let mode = i.div_ceil(2) as f64;
            let f = if i % 2 == 1 { (mode * th).cos() } else { (mode * th).sin() };
            f / PI.sqrt()
        };
        scale * v
    })
}

fn nodes(k: usize) -> Vec<f64> {
    let n = 2 * k + 1;
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Multiplication by `f(theta)` on every boundary circle.
pub fn multiplication_matrix<F: Fn(f64) -> f64>(op: &TruncatedOperator, f: F) -> DMatrix<f64> {
    let b = op.block();
    let u = dft(op.k);
    let d = DMatrix::from_diagonal(&DVector::from_iterator(b, nodes(op.k).into_iter().map(f)));
    let block = &u * d * u.transpose();
    let circles = op.radii().len();
    let mut m = DMatrix::zeros(b * circles, b * circles);
    for c in 0..circles {
        m.view_mut((c * b, c * b), (b, b)).copy_from(&block);
    }
    m
}

/// `N_t = M_{e^{-t w/2}} N_0 M_{e^{-t w/2}}`.
///
/// Needs `K >= deg w`. The numerical kernel is compared with the Fourier
/// coefficients of `e^{t w/2}`; a discrepancy above [`KERNEL_TOLERANCE`]
/// means the truncation is too coarse for this factor.
pub fn conformal_family(op: &TruncatedOperator, omega: &ConformalFactor, t: f64) -> Result<TruncatedOperator> {
    if op.k < omega.degree() {
        return Err(Error::Truncation(format!("K = {} below the degree {} of the factor", op.k, omega.degree())));
    }
    let e = multiplication_matrix(op, |th| (-0.5 * t * omega.eval(th)).exp());
    let mut matrix = &e * &op.matrix * &e;
    matrix = (&matrix + matrix.transpose()) * 0.5;
    let out = TruncatedOperator { k: op.k, matrix, geometry: op.geometry };
    let misalignment = kernel_misalignment(&out, omega, t)?;
    if misalignment > KERNEL_TOLERANCE {
        return Err(Error::Truncation(format!("kernel differs from e^(t w/2) by {misalignment:e} at K = {}", op.k)));
    }
    Ok(out)
}

/// Coefficients of `e^{t w/2}` (constant on each circle) in the truncated
/// basis, from a fine quadrature, normalized to unit length.
pub fn expected_kernel(op: &TruncatedOperator, omega: &ConformalFactor, t: f64) -> DVector<f64> {
    let b = op.block();
    let radii = op.radii();
    let h = 2.0 * PI / FINE_NODES as f64;
    let samples: Vec<(f64, f64)> = (0..FINE_NODES)
        .map(|j| {
            let th = j as f64 * h;
            (th, (0.5 * t * omega.eval(th)).exp())
        })
        .collect();
    let mut v = DVector::zeros(b * radii.len());
    for (c, r) in radii.iter().enumerate() {
        for i in 0..b {
            let mode = i.div_ceil(2) as f64;
            let coef: f64 = samples
                .iter()
                .map(|&(th, f)| {
                    let phi = if i == 0 {
                        1.0 / (2.0 * PI * r).sqrt()
                    } else if i % 2 == 1 {
                        (mode * th).cos() / (PI * r).sqrt()
                    } else {
                        (mode * th).sin() / (PI * r).sqrt()
                    };
                    f * phi * r * h
                })
                .sum();
            v[c * b + i] = coef;
        }
    }
    v.normalize()
}

/// Bound on the sine of the angle between the kernel of `op` and
/// [`expected_kernel`]: with one eigenvalue below [`KERNEL_THRESHOLD`] and the
/// rest at least `gap`, `sin(angle) <= |N k| / gap` for the unit vector `k`.
pub fn kernel_misalignment(op: &TruncatedOperator, omega: &ConformalFactor, t: f64) -> Result<f64> {
    let ev = op.eigenvalues();
    if ev.len() < 2 || ev[0].abs() > KERNEL_THRESHOLD {
        return Err(Error::Truncation(format!(
            "smallest eigenvalue {:e} is not a kernel",
            ev.first().copied().unwrap_or(f64::NAN)
        )));
    }
    let gap = ev[1];
    if gap <= KERNEL_THRESHOLD {
        return Err(Error::Truncation("kernel is not one-dimensional".into()));
    }
    Ok((&op.matrix * expected_kernel(op, omega, t)).norm() / gap)
}

/// `(log pdet, kernel dimension)`: eigenvalues below [`KERNEL_THRESHOLD`]
/// are excluded.
pub fn log_pseudo_det(op: &TruncatedOperator) -> Result<(f64, usize)> {
    let ev = op.eigenvalues();
    let mut sum = 0.0;
    let mut kernel = 0;
    for l in ev {
        if l.abs() < KERNEL_THRESHOLD {
            kernel += 1;
        } else if l < 0.0 {
            return Err(Error::Truncation(format!("negative eigenvalue {l:e}")));
        } else {
            sum += l.ln();
        }
    }
    Ok((sum, kernel))
}

/// `l_t = sum over circles of r int e^{t w} dtheta`, by the trapezoid rule
/// (spectrally accurate for trigonometric polynomials).
pub fn boundary_length(geometry: Geometry, omega: &ConformalFactor, t: f64) -> f64 {
    let h = 2.0 * PI / FINE_NODES as f64;
    let integral: f64 = (0..FINE_NODES).map(|j| (t * omega.eval(j as f64 * h)).exp()).sum::<f64>() * h;
    let total_radius = match geometry {
        Geometry::Disc { radius } => radius,
        Geometry::Annulus { rho } => rho + 1.0,
    };
    total_radius * integral
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeCheck {
    pub k: usize,
    pub t: Vec<f64>,
    /// `d/dt [log pdet N_t - log l_t]` at each `t`.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Step of the central differences.
pub const DIFF_STEP: f64 = 1e-3;

/// Central-difference value of `d/dt [log pdet N_t - log l_t]` on `t_grid`.
///
/// `w` must have mean exactly zero and `K >= 4 deg w`. Each evaluation also
/// checks that the kernel is one-dimensional and follows `e^{t w/2}`.
pub fn derivative_identity_check(
    geometry: Geometry,
    omega: &ConformalFactor,
    k: usize,
    t_grid: &[f64],
) -> Result<DerivativeCheck> {
    if omega.mean != 0.0 {
        return Err(Error::InvalidInput(format!("conformal factor must have zero mean, got {}", omega.mean)));
    }
    if k < 4 * omega.degree() {
        return Err(Error::Truncation(format!("K = {k} below 4 x degree {}", omega.degree())));
    }
    let op = build_dn_truncated(geometry, k)?;
    let f = |t: f64| -> Result<f64> {
        let nt = conformal_family(&op, omega, t)?;
        let (lp, kernel) = log_pseudo_det(&nt)?;
        if kernel != 1 {
            return Err(Error::Truncation(format!("kernel dimension {kernel} at t = {t}")));
        }
        Ok(lp - boundary_length(geometry, omega, t).ln())
    };
    let residuals = t_grid
        .par_iter()
        .map(|&t| Ok((f(t + DIFF_STEP)? - f(t - DIFF_STEP)?) / (2.0 * DIFF_STEP)))
        .collect::<Result<Vec<f64>>>()?;
    let max_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    Ok(DerivativeCheck { k, t: t_grid.to_vec(), residuals, max_residual })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub k: usize,
    pub max_residual: f64,
}

/// Residual of [`derivative_identity_check`] for each `K`.
pub fn convergence_table(
    geometry: Geometry,
    omega: &ConformalFactor,
    ks: &[usize],
    t_grid: &[f64],
) -> Result<Vec<ConvergenceRow>> {
    ks.iter()
        .map(|&k| {
            derivative_identity_check(geometry, omega, k, t_grid)
                .map(|c| ConvergenceRow { k, max_residual: c.max_residual })
        })
        .collect()
}

/// Non-increasing in `K`, up to differences below `floor`.
pub fn is_monotone(rows: &[ConvergenceRow], floor: f64) -> bool {
    rows.windows(2).all(|w| w[1].max_residual <= w[0].max_residual.max(floor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(r: f64) -> Geometry {
        Geometry::Disc { radius: r }
    }

    #[test]
    fn disc_spectrum() {
        let op = build_dn_truncated(disc(1.0), 3).unwrap();
        let ev = op.eigenvalues();
        let expect = [0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        assert_eq!(op.symmetry_defect(), 0.0);
        assert!(build_dn_truncated(disc(1.0), 0).is_err());
    }

    #[test]
    fn dft_is_orthogonal() {
        let u = dft(5);
        assert!((&u * u.transpose() - DMatrix::identity(11, 11)).amax() < 1e-14);
    }

    #[test]
    fn multiplication_is_a_homomorphism() {
        let op = build_dn_truncated(disc(1.0), 6).unwrap();
        let f = |th: f64| 1.0 + 0.3 * th.cos();
        let g = |th: f64| (0.2 * th.sin()).exp();
        let lhs = multiplication_matrix(&op, f) * multiplication_matrix(&op, g);
        let rhs = multiplication_matrix(&op, |th| f(th) * g(th));
        assert!((lhs - rhs).amax() < 1e-14);
    }

    #[test]
    fn zero_mean_multiplication_is_traceless() {
        let op = build_dn_truncated(Geometry::Annulus { rho: 2.0 }, 8).unwrap();
        let w = ConformalFactor::new(0.0, vec![0.3, -0.1], vec![0.2]).unwrap();
        assert!(multiplication_matrix(&op, |th| w.eval(th)).trace().abs() < 1e-14);
    }

    #[test]
    fn t_zero_is_identity() {
        let op = build_dn_truncated(disc(2.0), 8).unwrap();
        let w = ConformalFactor::new(0.0, vec![0.3], vec![]).unwrap();
        let n0 = conformal_family(&op, &w, 0.0).unwrap();
        assert!((n0.matrix - &op.matrix).amax() < 1e-13);
    }

    #[test]
    fn constant_factor_scales() {
        let op = build_dn_truncated(disc(1.0), 8).unwrap();
        let c = 0.7;
        let nt = conformal_family(&op, &ConformalFactor::constant(c), 1.0).unwrap();
        assert!((nt.matrix - &op.matrix * (-c).exp()).amax() < 1e-13);
    }

    #[test]
    fn nonzero_mean_rejected() {
        let w = ConformalFactor::constant(0.1);
        assert!(derivative_identity_check(disc(1.0), &w, 8, &[0.5]).is_err());
        let w = ConformalFactor::new(0.0, vec![0.0, 0.0, 0.3], vec![]).unwrap();
        assert!(matches!(derivative_identity_check(disc(1.0), &w, 8, &[0.5]), Err(Error::Truncation(_))));
    }

    #[test]
    fn zero_factor_gives_zero_residual() {
        let w = ConformalFactor::new(0.0, vec![], vec![]).unwrap();
        let c = derivative_identity_check(disc(1.0), &w, 8, &[0.0, 0.5, 1.0]).unwrap();
        assert!(c.max_residual < 1e-12);
    }

    #[test]
    fn factor_json() {
        let w = ConformalFactor::from_json(r#"{"mean":0,"cos":[0.3]}"#).unwrap();
        assert_eq!(w.degree(), 1);
        let l = ConformalFactor::from_json("[0.0, 0.3, 0.1, 0.0, -0.2]").unwrap();
        assert_eq!(l, ConformalFactor::new(0.0, vec![0.3, 0.0], vec![0.1, -0.2]).unwrap());
        assert_eq!(l.degree(), 2);
        assert!(ConformalFactor::from_json("[1,2").is_err());
    }
}
