//! LU factorization with partial pivoting.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Packed `PA = LU` factors: unit lower `L` below the diagonal, `U` on and above.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    swaps: usize,
    min_pivot: f64,
}

/// Pivot magnitude below which the matrix counts as singular.
pub fn singular_threshold<T: Scalar>(a: &Matrix<T>) -> f64 {
    a.dim() as f64 * f64::EPSILON * a.max_abs()
}

impl<T: Scalar> Lu<T> {
    /// Factors `a`, failing with [`Error::Singular`] on a pivot below
    /// `n * eps * max|a_ij|`.
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        let threshold = singular_threshold(a);
        let lu = Self::factor_raw(a, None);
        if lu.min_pivot == 0.0 || lu.min_pivot < threshold {
            return Err(Error::Singular {
                pivot: lu.min_pivot,
                threshold,
            });
        }
        Ok(lu)
    }

    /// Factors `a`, replacing any pivot smaller than `floor` by `floor`.
    ///
    /// Never fails; this is the factorization inverse iteration wants, where
    /// the shifted matrix is singular on purpose.
    pub fn factor_regularized(a: &Matrix<T>, floor: f64) -> Self {
        Self::factor_raw(a, Some(floor.max(f64::MIN_POSITIVE)))
    }

    fn factor_raw(a: &Matrix<T>, floor: Option<f64>) -> Self {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].modulus()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if p != k {
                lu.swap_rows(p, k);
                perm.swap(p, k);
                swaps += 1;
            }
            min_pivot = min_pivot.min(pmax);
            if let Some(floor) = floor {
                if pmax < floor {
                    // keep the phase of the pivot, lift its modulus
                    let piv = lu[(k, k)];
                    lu[(k, k)] = if pmax == 0.0 {
                        T::from_real(floor)
                    } else {
                        piv.scale(floor / pmax)
                    };
                }
            } else if pmax == 0.0 {
                continue;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Lu {
            lu,
            perm,
            swaps,
            min_pivot,
        }
    }

    pub fn dim(&self) -> usize {
        self.lu.dim()
    }

    /// Smallest pivot modulus encountered.
    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    /// Solves `A x = b` for a single right-hand side.
    pub fn solve_vec(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.dim();
        b.expect_dim(n)?;
        let mut x = Matrix::zeros(n);
        let mut col = vec![T::zero(); n];
        for j in 0..n {
            for (i, c) in col.iter_mut().enumerate() {
                *c = b[(i, j)];
            }
            for (i, v) in self.solve_vec(&col).into_iter().enumerate() {
                x[(i, j)] = v;
            }
        }
        Ok(x)
    }

    pub fn determinant(&self) -> T {
        let prod = (0..self.dim()).fold(T::one(), |acc, i| acc * self.lu[(i, i)]);
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }
}

impl Lu<f64> {
    /// Sign of the determinant from pivot signs and permutation parity.
    pub fn determinant_sign(&self) -> i8 {
        let mut negative = self.swaps % 2 == 1;
        for i in 0..self.dim() {
            let p = self.lu[(i, i)];
            if p == 0.0 {
                return 0;
            }
            if p < 0.0 {
                negative = !negative;
            }
        }
        if negative {
            -1
        } else {
            1
        }
    }
}

/// Solves `A X = B` by partial-pivoting LU.
pub fn solve_lu<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    b.expect_dim(a.dim())?;
    Lu::factor(a)?.solve(b)
}

pub fn inverse<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    solve_lu(a, &Matrix::identity(a.dim()))
}

/// Sign of `det(a)`; [`Error::Singular`] when `a` is numerically singular.
pub fn determinant_sign(a: &Matrix<f64>) -> Result<i8> {
    Ok(Lu::factor(a)?.determinant_sign())
}

pub fn determinant<T: Scalar>(a: &Matrix<T>) -> T {
    Lu::factor_raw(a, None).determinant()
}

/// Smallest pivot modulus of partial-pivoting LU (a cheap singular-value proxy).
pub fn smallest_pivot<T: Scalar>(a: &Matrix<T>) -> f64 {
    Lu::factor_raw(a, None).min_pivot
}
