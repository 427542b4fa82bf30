//! Determinants, invertibility verdicts, linear solves and the spectral
//! helpers the classifiers are built on.
//!
//! Two verdict semantics coexist, selected by [`PrecisionConfig`]:
//!
//! * **Double mode** decides from singular values. A matrix is singular when
//!   `sigma_min <= zero_tol * max(1, sigma_max)`; a verdict within a factor
//!   of ten of that threshold is reported inconclusive instead of guessed.
//!   The determinant error bound is the Hadamard-scaled unit-roundoff
//!   estimate `n^2 * u * H(A)`.
//! * **Extended mode** runs a fully pivoted elimination in multiprecision
//!   ball arithmetic and declares singular exactly when the computed |det|
//!   does not exceed the accumulated error radius.
//!
//! The SVD behind `sigma_extremes` and the Hermitian eigensolve behind
//! `hermitian_eigen_range` come from nalgebra; everything else is local.

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::ball::{up, Ball};
use crate::cmatrix::{complex_mag_upper, C64, CMatrix, Matrix};
use crate::error::{Error, Result};
use crate::precision::{Mode, PrecisionConfig};
use crate::scalar::Real;

/// Outcome of an invertibility test on one square matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Invertible,
    Singular,
    /// Double mode only: the singular-value test landed inside the
    /// `[zero_tol, 10 * zero_tol)` band around the threshold.
    Inconclusive,
}

/// Invertibility verdict with the evidence that produced it.
///
/// `min_singular` is populated in double mode; `error_bound` bounds the
/// determinant error in both modes (Hadamard estimate in double mode,
/// tracked rounding radius in extended mode).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvertibilityVerdict {
    pub status: VerdictStatus,
    pub min_singular: Option<f64>,
    pub abs_det: f64,
    pub error_bound: f64,
}

/// A determinant value with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Det {
    /// The computed determinant, rounded to double precision for reporting.
    pub value: C64,
    /// |value|.
    pub abs_det: f64,
    /// Bound on |computed - exact|.
    pub error_bound: f64,
}

/// Determinant of a square matrix under the configured precision policy.
pub fn det(a: &CMatrix, cfg: &PrecisionConfig) -> Result<Det> {
    cfg.validate()?;
    a.require_square()?;
    a.require_finite()?;
    Ok(match cfg.mode {
        Mode::Double => det_double(a),
        Mode::Extended { bits } => det_extended(a, bits),
    })
}

pub(crate) fn det_double(a: &CMatrix) -> Det {
    let n = a.nrows();
    let value = plain_lu_det(a);
    let u = f64::EPSILON / 2.0;
    let error_bound = (n * n) as f64 * u * a.hadamard_upper();
    Det {
        value,
        abs_det: value.norm(),
        error_bound,
    }
}

pub(crate) fn det_extended(a: &CMatrix, bits: u32) -> Det {
    let raw = ball_det(&a.lift(bits));
    finish_raw_det(&raw)
}

/// Rounds a raw extended determinant to the reporting form, folding the
/// double-conversion wobble into the bound. The conversion keeps 128
/// mantissa bits before the final rounding, so 2e-15 relative covers it.
pub(crate) fn finish_raw_det<T: Real>(raw: &RawDet<T>) -> Det {
    let value = C64::new(raw.value.re.to_f64(), raw.value.im.to_f64());
    let abs_det = value.norm();
    Det {
        value,
        abs_det,
        error_bound: up(raw.radius) + abs_det * 2e-15,
    }
}

/// Invertibility verdict under the configured precision policy.
pub fn invertibility(a: &CMatrix, cfg: &PrecisionConfig) -> Result<InvertibilityVerdict> {
    cfg.validate()?;
    a.require_square()?;
    a.require_finite()?;
    Ok(match cfg.mode {
        Mode::Double => {
            let (sigma_min, sigma_max) = sigma_extremes(a)?;
            let d = det_double(a);
            verdict_from_sigma(sigma_min, sigma_max, cfg.zero_tol, &d)
        }
        Mode::Extended { bits } => {
            let d = det_extended(a, bits);
            verdict_from_extended_det(&d)
        }
    })
}

pub(crate) fn verdict_from_sigma(
    sigma_min: f64,
    sigma_max: f64,
    zero_tol: f64,
    d: &Det,
) -> InvertibilityVerdict {
    let scale = sigma_max.max(1.0);
    let status = if sigma_min <= zero_tol * scale {
        VerdictStatus::Singular
    } else if sigma_min < 10.0 * zero_tol * scale {
        VerdictStatus::Inconclusive
    } else {
        VerdictStatus::Invertible
    };
    InvertibilityVerdict {
        status,
        min_singular: Some(sigma_min),
        abs_det: d.abs_det,
        error_bound: d.error_bound,
    }
}

pub(crate) fn verdict_from_extended_det(d: &Det) -> InvertibilityVerdict {
    let status = if d.abs_det <= d.error_bound {
        VerdictStatus::Singular
    } else {
        VerdictStatus::Invertible
    };
    InvertibilityVerdict {
        status,
        min_singular: None,
        abs_det: d.abs_det,
        error_bound: d.error_bound,
    }
}

/// Solves `A x = b`, refusing when `A` fails the invertibility verdict, and
/// validates the residual `||Ax - b||_inf <= rel_tol * ||A|| * ||x||_inf * n`
/// before returning.
pub fn solve(a: &CMatrix, b: &[C64], cfg: &PrecisionConfig) -> Result<Vec<C64>> {
    cfg.validate()?;
    let n = a.require_square()?;
    a.require_finite()?;
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            left: format!("{n}x{n}"),
            right: format!("vector of {}", b.len()),
            context: "linear solve",
        });
    }
    let verdict = invertibility(a, cfg)?;
    if verdict.status != VerdictStatus::Invertible {
        return Err(Error::SingularSystem { verdict });
    }
    let x = match cfg.mode {
        Mode::Double => lu_solve(a, b)?,
        Mode::Extended { bits } => {
            let ax = a.lift(bits);
            let proto = ax.proto();
            let bx: Vec<Complex<_>> = b
                .iter()
                .map(|z| Complex::new(proto.of_f64(z.re), proto.of_f64(z.im)))
                .collect();
            lu_solve(&ax, &bx)?
                .into_iter()
                .map(|z| C64::new(z.re.to_f64(), z.im.to_f64()))
                .collect()
        }
    };
    let residual = residual_inf(a, &x, b);
    let allowed = cfg.rel_tol * a.max_abs_upper() * norm_inf(&x) * n as f64;
    if residual > allowed {
        return Err(Error::ResidualCheck { residual, allowed });
    }
    Ok(x)
}

fn norm_inf(x: &[C64]) -> f64 {
    x.iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn residual_inf(a: &CMatrix, x: &[C64], b: &[C64]) -> f64 {
    let ax = a.mul_vec(x).expect("dimensions checked");
    ax.iter()
        .zip(b)
        .fold(0.0, |m, (l, r)| m.max((l - r).norm()))
}

/// Smallest and largest singular values.
pub fn sigma_extremes(a: &CMatrix) -> Result<(f64, f64)> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::InvalidArgument(
            "sigma_extremes needs a nonempty matrix".into(),
        ));
    }
    a.require_finite()?;
    let m = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
    let sv = m.singular_values();
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for s in sv.iter() {
        lo = lo.min(*s);
        hi = hi.max(*s);
    }
    Ok((lo, hi))
}

/// Extreme eigenvalues of a Hermitian matrix.
///
/// The input must be Hermitian within `rel_tol * max(1, max entry)`; it is
/// symmetrized before the solve so the result is exactly real.
pub fn hermitian_eigen_range(g: &CMatrix, rel_tol: f64) -> Result<(f64, f64)> {
    let n = g.require_square()?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "hermitian_eigen_range needs a nonempty matrix".into(),
        ));
    }
    g.require_finite()?;
    let defect = g.hermitian_defect();
    let allowed = rel_tol * g.max_abs_upper().max(1.0);
    if defect > allowed {
        return Err(Error::NotHermitian { defect, allowed });
    }
    let m = DMatrix::from_fn(n, n, |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5);
    let eig = m.symmetric_eigen();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for l in eig.eigenvalues.iter() {
        lo = lo.min(*l);
        hi = hi.max(*l);
    }
    Ok((lo, hi))
}

/// Plain LU determinant with partial pivoting. Selecting pivots by an `f64`
/// magnitude estimate keeps the routine generic; an exactly zero pivot
/// column yields an exactly zero determinant.
pub(crate) fn plain_lu_det<T: Real>(a: &Matrix<T>) -> Complex<T> {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    let proto = a.proto();
    let zero = Complex::new(proto.of_f64(0.0), proto.of_f64(0.0));
    let one = Complex::new(proto.of_f64(1.0), proto.of_f64(0.0));
    if n == 0 {
        return one;
    }
    let mut w: Vec<Complex<T>> = a.entries().to_vec();
    let at = |w: &Vec<Complex<T>>, i: usize, j: usize| w[i * n + j].clone();
    let mut det = one;
    let mut negate = false;
    for s in 0..n {
        let mut best = s;
        let mut best_mag = complex_mag_upper(&at(&w, s, s));
        for i in s + 1..n {
            let m = complex_mag_upper(&at(&w, i, s));
            if m > best_mag {
                best_mag = m;
                best = i;
            }
        }
        if best_mag == 0.0 {
            return zero;
        }
        if best != s {
            for j in 0..n {
                w.swap(s * n + j, best * n + j);
            }
            negate = !negate;
        }
        let piv = at(&w, s, s);
        det = det * piv.clone();
        for i in s + 1..n {
            let factor = at(&w, i, s) / piv.clone();
            for j in s + 1..n {
                let upd = at(&w, i, j) - factor.clone() * at(&w, s, j);
                w[i * n + j] = upd;
            }
            w[i * n + s] = zero.clone();
        }
    }
    if negate {
        -det
    } else {
        det
    }
}

/// LU solve with partial pivoting. The caller is responsible for verdict
/// gating; an exactly zero pivot still errors defensively.
pub(crate) fn lu_solve<T: Real>(a: &Matrix<T>, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let n = a.require_square()?;
    let proto = a.proto();
    let zero = Complex::new(proto.of_f64(0.0), proto.of_f64(0.0));
    let mut w: Vec<Complex<T>> = a.entries().to_vec();
    let mut x: Vec<Complex<T>> = b.to_vec();
    for s in 0..n {
        let mut best = s;
        let mut best_mag = complex_mag_upper(&w[s * n + s]);
        for i in s + 1..n {
            let m = complex_mag_upper(&w[i * n + s]);
            if m > best_mag {
                best_mag = m;
                best = i;
            }
        }
        if best_mag == 0.0 {
            return Err(Error::SingularSystem {
                verdict: InvertibilityVerdict {
                    status: VerdictStatus::Singular,
                    min_singular: None,
                    abs_det: 0.0,
                    error_bound: 0.0,
                },
            });
        }
        if best != s {
            for j in 0..n {
                w.swap(s * n + j, best * n + j);
            }
            x.swap(s, best);
        }
        let piv = w[s * n + s].clone();
        for i in s + 1..n {
            let factor = w[i * n + s].clone() / piv.clone();
            for j in s + 1..n {
                let upd = w[i * n + j].clone() - factor.clone() * w[s * n + j].clone();
                w[i * n + j] = upd;
            }
            w[i * n + s] = zero.clone();
            let upd = x[i].clone() - factor * x[s].clone();
            x[i] = upd;
        }
    }
    for s in (0..n).rev() {
        let mut acc = x[s].clone();
        for j in s + 1..n {
            acc = acc - w[s * n + j].clone() * x[j].clone();
        }
        x[s] = acc / w[s * n + s].clone();
    }
    Ok(x)
}

/// Raw determinant from the ball elimination: the computed center, the
/// rounding radius, and whether the elimination had to stop on a pivot
/// whose ball contained zero around a nonzero center.
#[derive(Debug, Clone)]
pub(crate) struct RawDet<T: Real> {
    pub value: Complex<T>,
    pub radius: f64,
    /// True when no usable pivot remained but the block was not exactly
    /// zero; the determinant cannot be certified at this precision.
    pub ambiguous: bool,
}

impl<T: Real> RawDet<T> {
    /// The elimination cancelled the remaining block to exact zeros.
    pub fn is_exact_zero_witness(&self) -> bool {
        self.value.is_zero() && !self.ambiguous
    }

    /// |value| is safely above the radius.
    pub fn certifies_invertible(&self) -> bool {
        !self.ambiguous && complex_mag_upper(&self.value) * (1.0 - 1e-9) > self.radius
            && !self.value.is_zero()
    }
}

/// Fully pivoted elimination in ball arithmetic.
///
/// When every candidate pivot ball contains zero the elimination stops: the
/// pivots so far are multiplied by a ball centered at zero whose radius is
/// a Hadamard bound on the remaining block, so the result is still a valid
/// enclosure of the true determinant.
pub(crate) fn ball_det<T: Real>(a: &Matrix<T>) -> RawDet<T> {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    let proto = a.proto();
    let zero = Complex::new(proto.of_f64(0.0), proto.of_f64(0.0));
    let one = Complex::new(proto.of_f64(1.0), proto.of_f64(0.0));
    let mut w: Vec<Ball<T>> = a.entries().iter().map(|z| Ball::from_computed(z.clone())).collect();
    let mut det = Ball::exact(one);
    let mut negate = false;
    for s in 0..n {
        let (mut bi, mut bj) = (s, s);
        let mut best_mag = -1.0f64;
        for i in s..n {
            for j in s..n {
                let m = w[i * n + j].mag();
                if m > best_mag {
                    best_mag = m;
                    bi = i;
                    bj = j;
                }
            }
        }
        let best = w[bi * n + bj].clone();
        if best.contains_zero() {
            // A remaining block of zero values with zero radii was reached
            // by exact arithmetic, so the true determinant is exactly zero
            // no matter how wide the pivot balls are. Anything else is an
            // abort: enclose the rest by a Hadamard bound and flag it.
            let exact_zero_block = (s..n).all(|i| {
                (s..n).all(|j| {
                    let b = &w[i * n + j];
                    b.v.is_zero() && b.r == 0.0
                })
            });
            if exact_zero_block {
                return RawDet {
                    value: zero,
                    radius: 0.0,
                    ambiguous: false,
                };
            }
            let mut h = 1.0f64;
            for i in s..n {
                let mut row2 = 0.0f64;
                for j in s..n {
                    let b = &w[i * n + j];
                    let m = b.mag() + b.r;
                    row2 += m * m;
                }
                h = up(h * row2.sqrt());
            }
            let rest = Ball { v: zero, r: up(h) };
            let combined = det.mul(&rest);
            return RawDet {
                value: combined.v,
                radius: combined.r,
                ambiguous: true,
            };
        }
        if bi != s {
            for j in 0..n {
                w.swap(s * n + j, bi * n + j);
            }
            negate = !negate;
        }
        if bj != s {
            for i in 0..n {
                w.swap(i * n + s, i * n + bj);
            }
            negate = !negate;
        }
        let piv = w[s * n + s].clone();
        det = det.mul(&piv);
        for i in s + 1..n {
            let factor = w[i * n + s].div(&piv);
            for j in s + 1..n {
                let upd = w[i * n + j].sub(&factor.mul(&w[s * n + j]));
                w[i * n + j] = upd;
            }
            w[i * n + s] = Ball::exact(zero.clone());
        }
    }
    if negate {
        det = det.neg();
    }
    RawDet {
        value: det.v,
        radius: det.r,
        ambiguous: false,
    }
}
