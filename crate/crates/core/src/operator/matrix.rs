use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![C::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { C::one() } else { C::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { dim, data }
    }

    /// Builds a matrix from `dim * dim` row-major entries, rejecting bad
    /// lengths and non-finite values.
    pub fn from_row_major(dim: usize, data: Vec<C<T>>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::BadShape {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| Complex::new(crate::scalar::lit(rows[i][j]), T::zero()))
    }

    pub fn diag(values: &[C<T>]) -> Self {
        let dim = values.len();
        Self::from_fn(dim, |i, j| if i == j { values[i] } else { C::zero() })
    }

    pub fn diag_real(values: &[T]) -> Self {
        let v: Vec<C<T>> = values.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::diag(&v)
    }

    /// `|u><v|`
    pub fn outer(u: &[C<T>], v: &[C<T>]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C<T>> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).fold(C::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, s: C<T>) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Frobenius distance `||self - other||_F`.
    pub fn distance(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + (*a - *b).norm_sqr())
            .sqrt()
    }

    /// `||M - M^dag||_F`
    pub fn hermiticity_defect(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_dim(rhs)?;
        Ok(self.matmul(rhs))
    }

    fn matmul(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).fold(C::zero(), |acc, j| acc + self.data[i * n + j] * v[j]))
            .collect()
    }

    /// `<u, M v>` with the first slot antilinear.
    pub fn sandwich(&self, u: &[C<T>], v: &[C<T>]) -> C<T> {
        inner(u, &self.mul_vec(v))
    }

    pub fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }
}

/// `<u, v> = sum conj(u_i) v_i`
pub fn inner<T: Real>(u: &[C<T>], v: &[C<T>]) -> C<T> {
    u.iter().zip(v).fold(C::zero(), |acc, (a, b)| acc + a.conj() * b)
}

/// Hilbert-Schmidt pairing `Tr(X^dag Y)`.
pub fn hs_inner<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>) -> Result<C<T>> {
    x.same_dim(y)?;
    Ok(x
        .data
        .iter()
        .zip(&y.data)
        .fold(C::zero(), |acc, (a, b)| acc + a.conj() * b))
}

/// `Tr(X Y)` without forming the product.
pub fn trace_product<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>) -> C<T> {
    let n = x.dim;
    let mut acc = C::zero();
    for i in 0..n {
        for k in 0..n {
            acc += x.data[i * n + k] * y.data[k * n + i];
        }
    }
    acc
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.matmul(rhs)
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| -z).collect(),
        }
    }
}

/// Standard Pauli matrices and a few qubit states used as fixtures.
pub mod pauli {
    use super::*;
    use crate::scalar::lit;

    pub fn x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn y<T: Real>() -> ComplexMatrix<T> {
        let i = Complex::new(T::zero(), T::one());
        ComplexMatrix::from_fn(2, |r, col| match (r, col) {
            (0, 1) => -i,
            (1, 0) => i,
            _ => C::zero(),
        })
    }

    pub fn z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    /// Projector onto `(|0> + e^{i phi}|1>)/sqrt(2)`.
    pub fn equator_state<T: Real>(phi: f64) -> ComplexMatrix<T> {
        let h = lit::<T>(0.5);
        let e = Complex::new(lit::<T>(phi.cos()), lit::<T>(phi.sin()));
        ComplexMatrix::from_fn(2, |r, col| match (r, col) {
            (0, 0) | (1, 1) => Complex::new(h, T::zero()),
            (0, 1) => e.conj().scale(h),
            _ => e.scale(h),
        })
    }
}
