//! Dense complex matrices over a generic real scalar.
//!
//! Row-major storage, sized for the desk scale this crate works at (subset
//! enumeration caps out near n = 24, so nothing here chases cache tricks).
//! `Matrix<f64>` is the common currency; `Matrix<Extended>` instances are
//! produced by [`Matrix::lift`] (an exact embedding, since every `f64` is
//! representable at 64 or more mantissa bits) or generated directly at
//! target precision by the Fourier module.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::scalar::{Extended, Real};

/// Complex double-precision scalar.
pub type C64 = Complex<f64>;

/// Dense row-major complex matrix over the real scalar `T`.
#[derive(Clone, PartialEq)]
pub struct Matrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

/// Double-precision complex matrix, the interchange format of the crate.
pub type CMatrix = Matrix<f64>;

/// Extended-precision complex matrix.
pub type XMatrix = Matrix<Extended>;

impl<T: Real> Matrix<T> {
    /// Zero matrix at the working precision of `proto`.
    pub fn zeros(proto: &T, rows: usize, cols: usize) -> Self {
        let z = Complex::new(proto.of_f64(0.0), proto.of_f64(0.0));
        Self {
            rows,
            cols,
            data: vec![z; rows * cols],
        }
    }

    /// Identity matrix at the working precision of `proto`.
    pub fn identity(proto: &T, n: usize) -> Self {
        let mut m = Self::zeros(proto, n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(proto.of_f64(1.0), proto.of_f64(0.0));
        }
        m
    }

    /// Builds an `rows x cols` matrix from a function of the position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Side length of a square matrix, or an error.
    pub fn require_square(&self) -> Result<usize> {
        if self.rows == self.cols {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Flat row-major entries.
    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    /// Matrix product.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", rhs.rows, rhs.cols),
                context: "matrix product",
            });
        }
        let proto = self.proto();
        let mut out = Self::zeros(&proto, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Complex::new(proto.of_f64(0.0), proto.of_f64(0.0));
                for k in 0..self.cols {
                    acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// Entry-wise difference.
    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", rhs.rows, rhs.cols),
                context: "matrix difference",
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a = a.clone() - b.clone();
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conjugate(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// The central (principal) submatrix on the rows and columns in `j`.
    pub fn central_submatrix(&self, j: &IndexSet) -> Result<Self> {
        self.submatrix(j, j)
    }

    /// The submatrix on `rows` x `cols` (equal cardinalities not required).
    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Self> {
        let n = self.require_square()?;
        for set in [rows, cols] {
            if set.ambient() != n {
                return Err(Error::DimensionMismatch {
                    left: format!("ambient {}", set.ambient()),
                    right: format!("matrix {n}"),
                    context: "submatrix selection",
                });
            }
        }
        let rsel = rows.as_slice();
        let csel = cols.as_slice();
        Ok(Self::from_fn(rsel.len(), csel.len(), |i, j| {
            self[(rsel[i], csel[j])].clone()
        }))
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("vector of {}", x.len()),
                context: "matrix-vector product",
            });
        }
        let proto = self.proto();
        let zero = Complex::new(proto.of_f64(0.0), proto.of_f64(0.0));
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = zero.clone();
                for k in 0..self.cols {
                    acc = acc + self[(i, k)].clone() * x[k].clone();
                }
                acc
            })
            .collect())
    }

    /// Largest entry magnitude, as an upper bound in `f64`.
    pub fn max_abs_upper(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, z| {
            m.max(complex_mag_upper(z))
        })
    }

    /// Hadamard bound on |det|: the product of row Euclidean norms,
    /// evaluated as an `f64` upper estimate.
    pub fn hadamard_upper(&self) -> f64 {
        let mut prod = 1.0f64;
        for i in 0..self.rows {
            let mut s = 0.0f64;
            for j in 0..self.cols {
                let m = complex_mag_upper(&self[(i, j)]);
                s += m * m;
            }
            prod *= s.sqrt() * (1.0 + 1e-12);
        }
        prod
    }

    /// Largest deviation from Hermitian symmetry, |a_ij - conj(a_ji)|.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)].clone() - self[(j, i)].conj();
                worst = worst.max(complex_mag_upper(&d));
            }
        }
        worst
    }

    /// Whether every entry strictly below (resp. above) the diagonal is
    /// exactly zero. Returns `(upper, lower)` flags.
    pub fn triangularity(&self) -> (bool, bool) {
        let mut upper = true;
        let mut lower = true;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self[(i, j)].is_zero() {
                    if i > j {
                        upper = false;
                    }
                    if i < j {
                        lower = false;
                    }
                }
            }
        }
        (upper, lower)
    }

    /// A zero scalar at this matrix's working precision.
    pub fn proto(&self) -> T {
        self.data
            .first()
            .map(|z| z.re.of_f64(0.0))
            .unwrap_or_else(T::zero)
    }

    /// Whether any entry is NaN or infinite (checked through `mag_upper`).
    pub fn has_non_finite(&self) -> bool {
        self.data
            .iter()
            .any(|z| !z.re.mag_upper().is_finite() || !z.im.mag_upper().is_finite())
    }
}

/// Upper bound on |z| as an `f64`.
pub(crate) fn complex_mag_upper<T: Real>(z: &Complex<T>) -> f64 {
    let re = z.re.mag_upper();
    let im = z.im.mag_upper();
    if re == 0.0 && im == 0.0 {
        0.0
    } else {
        re.hypot(im) * (1.0 + 1e-12)
    }
}

impl CMatrix {
    /// Builds a double-precision matrix from rows of `(re, im)` pairs.
    pub fn from_pairs(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let converted = rows
            .iter()
            .map(|row| row.iter().map(|&(re, im)| C64::new(re, im)).collect())
            .collect();
        let m: CMatrix = Matrix::from_rows(converted)?;
        m.require_finite()?;
        Ok(m)
    }

    /// Builds a real matrix (imaginary parts zero) from rows of `f64`.
    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        let converted = rows
            .iter()
            .map(|row| row.iter().map(|&re| C64::new(re, 0.0)).collect())
            .collect();
        let m: CMatrix = Matrix::from_rows(converted)?;
        m.require_finite()?;
        Ok(m)
    }

    /// Errors if any entry is NaN or infinite.
    pub fn require_finite(&self) -> Result<()> {
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let z = self[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite {
                        context: format!("entry ({i}, {j})"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Exact embedding into extended precision at `bits` of mantissa.
    pub fn lift(&self, bits: u32) -> XMatrix {
        let proto = Extended::with_bits(bits);
        Matrix::from_fn(self.nrows(), self.ncols(), |i, j| {
            let z = self[(i, j)];
            Complex::new(proto.of_f64(z.re), proto.of_f64(z.im))
        })
    }
}

impl XMatrix {
    /// Rounds every entry to double precision.
    pub fn round_to_c64(&self) -> CMatrix {
        Matrix::from_fn(self.nrows(), self.ncols(), |i, j| {
            let z = &self[(i, j)];
            C64::new(z.re.to_f64(), z.im.to_f64())
        })
    }
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
