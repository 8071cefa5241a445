//! Dense square matrices over `f64` or `Complex64`.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

pub type RealMatrix = Matrix<f64>;
pub type ComplexMatrix = Matrix<Complex64>;

impl<T: Scalar> Matrix<T> {
    /// Builds an `n x n` matrix from row-major entries, rejecting non-finite values.
    pub fn new(n: usize, data: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidShape("dimension must be positive".into()));
        }
        if data.len() != n * n {
            return Err(Error::InvalidShape(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                data.len()
            )));
        }
        let m = Matrix { n, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidShape(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Matrix::new(n, data)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![T::one(); n])
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// `blockdiag(a, b)`.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let n = a.n + b.n;
        Matrix::from_fn(n, |i, j| {
            if i < a.n && j < a.n {
                a[(i, j)]
            } else if i >= a.n && j >= a.n {
                b[(i - a.n, j - a.n)]
            } else {
                T::zero()
            }
        })
    }

    /// `[[a, b], [c, d]]` from four equally sized blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        let m = a.n;
        for blk in [b, c, d] {
            blk.expect_dim(m)?;
        }
        Ok(Matrix::from_fn(2 * m, |i, j| match (i < m, j < m) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - m)],
            (false, true) => c[(i - m, j)],
            (false, false) => d[(i - m, j - m)],
        }))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn expect_dim(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.n,
            });
        }
        Ok(())
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|x| !x.is_finite()) {
            Some(p) => Err(Error::NonFinite {
                row: p / self.n,
                col: p % self.n,
            }),
            None => Ok(()),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Frobenius norm: the submultiplicative norm every contraction test uses.
    pub fn frobenius_norm(&self) -> f64 {
        // scaled accumulation guards against overflow for huge entries
        let scale = self.max_abs();
        if scale == 0.0 || !scale.is_finite() {
            return scale;
        }
        let sum: f64 = self
            .data
            .iter()
            .map(|x| (x.modulus() / scale).powi(2))
            .sum();
        scale * sum.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.modulus()))
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|x| x.scale(s))
    }

    pub fn scale_by(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// `self + s I`.
    pub fn add_diag(&self, s: T) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] += s;
        }
        m
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        self.map(|x| x.to_complex())
    }

    /// Checked product; [`Mul`] panics on mismatched dimensions instead.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        rhs.expect_dim(self.n)?;
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == T::zero() {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Matrix { n, data: out }
    }

    /// `||self - other||_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm()
    }

    /// `||AB - BA||_F`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        (&(self * other) - &(other * self)).frobenius_norm()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.n;
        for j in 0..n {
            self.data.swap(a * n + j, b * n + j);
        }
    }

    /// Trailing principal block starting at `(offset, offset)`.
    pub fn trailing(&self, offset: usize) -> Self {
        let m = self.n - offset;
        Matrix::from_fn(m, |i, j| self[(i + offset, j + offset)])
    }
}

impl ComplexMatrix {
    /// Entrywise real part.
    pub fn re(&self) -> RealMatrix {
        self.map(|z| z.re)
    }

    /// Entrywise imaginary part.
    pub fn im(&self) -> RealMatrix {
        self.map(|z| z.im)
    }
}

/// Submultiplicative norm used for all contraction tests (Frobenius).
pub fn op_norm_bound<T: Scalar>(a: &Matrix<T>) -> f64 {
    a.frobenius_norm()
}

/// Checked matrix product.
pub fn matmul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    a.matmul(b)
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        self.mul_unchecked(rhs)
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_neutral() {
        let a = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let i = RealMatrix::identity(2);
        assert_eq!(matmul(&i, &a).unwrap(), a);
        assert_eq!(matmul(&a, &i).unwrap(), a);
    }

    #[test]
    fn diagonal_product() {
        let a = RealMatrix::from_diag(&[2.0, 3.0]);
        let b = RealMatrix::from_diag(&[5.0, 7.0]);
        assert_eq!(matmul(&a, &b).unwrap(), RealMatrix::from_diag(&[10.0, 21.0]));
    }

    #[test]
    fn quarter_turn_squares_to_minus_identity() {
        let r = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(matmul(&r, &r).unwrap(), ComplexMatrix::identity(2).scale(-1.0));
    }

    #[test]
    fn matmul_rejects_mismatch() {
        let a = RealMatrix::identity(2);
        let b = RealMatrix::identity(3);
        assert_eq!(
            matmul(&a, &b),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn frobenius_values() {
        assert_eq!(op_norm_bound(&RealMatrix::zeros(3)), 0.0);
        assert!((op_norm_bound(&RealMatrix::identity(3)) - 3f64.sqrt()).abs() < 1e-15);
        let m = RealMatrix::from_rows(&[vec![3.0, 4.0], vec![0.0, 0.0]]).unwrap();
        assert!((op_norm_bound(&m) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn constructor_rejects_nonfinite_and_bad_shape() {
        assert!(matches!(
            RealMatrix::new(2, vec![1.0, f64::NAN, 0.0, 1.0]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(RealMatrix::new(2, vec![1.0]), Err(Error::InvalidShape(_))));
        assert!(matches!(RealMatrix::new(0, vec![]), Err(Error::InvalidShape(_))));
        assert!(RealMatrix::from_rows(&[vec![1.0], vec![2.0]]).is_err());
    }

    #[test]
    fn blocks_assemble() {
        let a = RealMatrix::from_diag(&[1.0]);
        let b = RealMatrix::from_diag(&[2.0]);
        let m = RealMatrix::from_blocks(&a, &b, &b.scale(-1.0), &a).unwrap();
        assert_eq!(m.as_slice(), &[1.0, 2.0, -2.0, 1.0]);
        let d = RealMatrix::block_diag(&a, &b);
        assert_eq!(d.as_slice(), &[1.0, 0.0, 0.0, 2.0]);
    }
}
