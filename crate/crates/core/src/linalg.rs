//! Minimal dense linear algebra over `f64` and `Complex64`.
//!
//! Only what the point-set constructions need: products, Kronecker products,
//! LU-based solves and log-determinants, and entrywise residuals. Storage is
//! row-major.

use std::fmt::Debug;
use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_len, Error, Result};

/// Pivots smaller than this fraction of the largest absolute entry mark the
/// matrix as singular.
pub const SINGULAR_RELATIVE_PIVOT: f64 = 1e-13;

/// Field scalar usable in [`Matrix`].
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    /// Absolute value, or complex modulus.
    fn modulus(self) -> f64;
    fn conj(self) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn conj(self) -> Self {
        self
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
}

/// Dense row-major matrix with at least one row and one column.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RealMatrix = Matrix<f64>;
pub type ComplexMatrix = Matrix<Complex64>;

impl<T: Scalar> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Shape(format!(
                "ragged rows: expected {cols} columns, found {}",
                bad.len()
            )));
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    /// Builds a matrix entry by entry.
    ///
    /// Panics if either dimension is zero.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "empty {rows}x{cols} matrix");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| c * x).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(out)
    }

    /// `A · v`.
    pub fn mat_vec(&self, v: &[T]) -> Result<Vec<T>> {
        check_len(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect())
    }

    /// `Aᵗ · v` without forming the transpose.
    pub fn tr_mat_vec(&self, v: &[T]) -> Result<Vec<T>> {
        check_len(self.rows, v.len())?;
        let mut out = vec![T::zero(); self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + a * vi;
            }
        }
        Ok(out)
    }

    /// Kronecker product: entry `(ia·rB + ib, ja·cB + jb)` is `A[ia,ja]·B[ib,jb]`.
    pub fn kronecker(&self, rhs: &Self) -> Self {
        let (rb, cb) = (rhs.rows, rhs.cols);
        Self::from_fn(self.rows * rb, self.cols * cb, |i, j| {
            self[(i / rb, j / cb)] * rhs[(i % rb, j % cb)]
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.modulus()).fold(0.0, f64::max)
    }

    /// Largest entrywise `|A − B|`.
    pub fn max_abs_residual(&self, other: &Self) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max))
    }

    /// `log|det A|`, or `-∞` when a pivot falls below
    /// [`SINGULAR_RELATIVE_PIVOT`] times the largest entry.
    pub fn log_abs_det(&self) -> Result<f64> {
        self.require_square()?;
        Ok(match Lu::factor(self) {
            Some(lu) => lu.log_abs_det(),
            None => f64::NEG_INFINITY,
        })
    }

    /// Solves `A x = b` by partial-pivot LU.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        self.require_square()?;
        check_len(self.rows, b.len())?;
        let lu = Lu::factor(self).ok_or(Error::Singular)?;
        Ok(lu.solve(b))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let lu = Lu::factor(self).ok_or(Error::Singular)?;
        let mut inv = Self::zeros(n, n);
        let mut e = vec![T::zero(); n];
        for j in 0..n {
            e[j] = T::one();
            for (i, x) in lu.solve(&e).into_iter().enumerate() {
                inv[(i, j)] = x;
            }
            e[j] = T::zero();
        }
        Ok(inv)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl RealMatrix {
    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }
}

/// Unconjugated dot product.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Partial-pivot LU factorization `P A = L U`, packed in one buffer.
struct Lu<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    /// Returns `None` if the matrix is singular to the relative threshold.
    fn factor(a: &Matrix<T>) -> Option<Self> {
        let n = a.rows;
        let threshold = SINGULAR_RELATIVE_PIVOT * a.max_abs();
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot_mag) = (k..n)
                .map(|i| (i, lu[i * n + k].modulus()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_mag.is_nan() || pivot_mag <= threshold {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] = lu[i * n + j] - factor * u;
                }
            }
        }
        Some(Self { n, lu, perm })
    }

    fn log_abs_det(&self) -> f64 {
        (0..self.n)
            .map(|k| self.lu[k * self.n + k].modulus().ln())
            .sum()
    }

    fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s = (0..i).fold(x[i], |acc, j| acc - self.lu[i * n + j] * x[j]);
            x[i] = s;
        }
        for i in (0..n).rev() {
            let s = (i + 1..n).fold(x[i], |acc, j| acc - self.lu[i * n + j] * x[j]);
            x[i] = s / self.lu[i * n + i];
        }
        x
    }
}

/// A matrix whose scalar kind is only known at run time.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum AnyMatrix {
    Real(RealMatrix),
    Complex(ComplexMatrix),
}

impl AnyMatrix {
    pub fn rows(&self) -> usize {
        match self {
            Self::Real(m) => m.rows(),
            Self::Complex(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Self::Real(m) => m.cols(),
            Self::Complex(m) => m.cols(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Self::Complex(_))
    }

    /// Kronecker product of two matrices of the same scalar kind.
    pub fn kronecker(&self, rhs: &Self) -> Result<Self> {
        match (self, rhs) {
            (Self::Real(a), Self::Real(b)) => Ok(Self::Real(a.kronecker(b))),
            (Self::Complex(a), Self::Complex(b)) => Ok(Self::Complex(a.kronecker(b))),
            _ => Err(Error::ScalarKind),
        }
    }

    pub fn log_abs_det(&self) -> Result<f64> {
        match self {
            Self::Real(m) => m.log_abs_det(),
            Self::Complex(m) => m.log_abs_det(),
        }
    }

    pub fn max_abs_residual(&self, rhs: &Self) -> Result<f64> {
        match (self, rhs) {
            (Self::Real(a), Self::Real(b)) => a.max_abs_residual(b),
            (Self::Complex(a), Self::Complex(b)) => a.max_abs_residual(b),
            _ => Err(Error::ScalarKind),
        }
    }
}
