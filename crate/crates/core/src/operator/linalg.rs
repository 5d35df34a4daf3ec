//! Cyclic Jacobi eigensolver for Hermitian matrices and a pivoted LU solver.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real, C};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a Hermitian matrix. Eigenvalues ascending; column `k` of
/// `vectors` (stored as `vectors[k]`) belongs to `values[k]`.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Vec<C<T>>>,
}

/// Diagonalizes the Hermitian part of `m` by complex Jacobi rotations.
///
/// Only the upper triangle is trusted; the caller is responsible for the
/// Hermiticity check.
pub fn hermitian_eigen<T: Real>(m: &ComplexMatrix<T>) -> HermitianEigen<T> {
    let n = m.dim();
    let half = lit::<T>(0.5);
    let mut a = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()).scale(half));
    let mut v = ComplexMatrix::<T>::identity(n);

    let scale = a.frobenius_norm().max(T::min_positive_value());
    let target = T::epsilon() * T::epsilon() * scale * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[(i, k)]).collect())
        .collect();
    HermitianEigen { values, vectors }
}

fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == T::zero() {
        return;
    }
    let n = a.dim();
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let two = lit::<T>(2.0);
    let theta = (aqq - app) / (two * mag);
    let t = if theta >= T::zero() {
        T::one() / (theta + (theta * theta + T::one()).sqrt())
    } else {
        -T::one() / (-theta + (theta * theta + T::one()).sqrt())
    };
    let cth = T::one() / (t * t + T::one()).sqrt();
    let sth = t * cth;
    let cs = Complex::new(cth, T::zero());
    let sn = Complex::new(sth, T::zero());
    let pc = phase.conj();

    // A <- A J, V <- V J with J = [[c, s], [-s conj(e), c conj(e)]]
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * cs - akq * sn * pc;
        a[(k, q)] = akp * sn + akq * cs * pc;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cs - vkq * sn * pc;
        v[(k, q)] = vkp * sn + vkq * cs * pc;
    }
    // A <- J^dag A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * cs - aqk * sn * phase;
        a[(q, k)] = apk * sn + aqk * cs * phase;
    }
    a[(p, q)] = C::zero();
    a[(q, p)] = C::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Vec<T> {
    hermitian_eigen(m).values
}

/// Trace norm `||H||_1` of a Hermitian matrix.
pub fn trace_norm<T: Real>(h: &ComplexMatrix<T>) -> T {
    hermitian_eigenvalues(h)
        .into_iter()
        .fold(T::zero(), |acc, x| acc + x.abs())
}

/// Dense general complex matrix of arbitrary size, used for the `d^2 x d^2`
/// systems. Row-major.
#[derive(Clone, Debug)]
pub struct DenseSystem<T> {
    pub n: usize,
    pub data: Vec<C<T>>,
}

impl<T: Real> DenseSystem<T> {
    pub fn zeros(n: usize) -> Self {
        DenseSystem {
            n,
            data: vec![C::zero(); n * n],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C<T> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C<T>) {
        self.data[i * self.n + j] = z;
    }

    pub fn to_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.n, |i, j| self.at(i, j))
    }

    /// Solves `self * X = rhs` for a row-major `n x m` right-hand side by
    /// partially pivoted Gaussian elimination, followed by one round of
    /// iterative refinement.
    pub fn solve(&self, rhs: &[C<T>], m: usize) -> Result<Vec<C<T>>> {
        let lu = Lu::factor(self)?;
        let mut x = lu.solve(rhs, m);
        let residual = self.residual(&x, rhs, m);
        let correction = lu.solve(&residual, m);
        for (xi, ci) in x.iter_mut().zip(correction) {
            *xi += ci;
        }
        Ok(x)
    }

    fn residual(&self, x: &[C<T>], rhs: &[C<T>], m: usize) -> Vec<C<T>> {
        let n = self.n;
        let mut r = rhs.to_vec();
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                for j in 0..m {
                    r[i * m + j] -= a * x[k * m + j];
                }
            }
        }
        r
    }

    pub fn inverse(&self) -> Result<DenseSystem<T>> {
        let n = self.n;
        let mut eye = vec![C::zero(); n * n];
        for i in 0..n {
            eye[i * n + i] = C::one();
        }
        Ok(DenseSystem {
            n,
            data: self.solve(&eye, n)?,
        })
    }
}

struct Lu<T> {
    n: usize,
    lu: Vec<C<T>>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    fn factor(a: &DenseSystem<T>) -> Result<Self> {
        let n = a.n;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = lu.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
        if scale == T::zero() {
            return Err(Error::SingularSystem);
        }
        for col in 0..n {
            let (pivot, best) = (col..n)
                .map(|r| (r, lu[r * n + col].norm()))
                .fold((col, -T::one()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= T::epsilon() * scale {
                return Err(Error::SingularSystem);
            }
            if pivot != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot * n + j);
                }
                perm.swap(col, pivot);
            }
            let d = lu[col * n + col];
            for r in (col + 1)..n {
                let f = lu[r * n + col] / d;
                lu[r * n + col] = f;
                if f.is_zero() {
                    continue;
                }
                for j in (col + 1)..n {
                    let u = lu[col * n + j];
                    lu[r * n + j] -= f * u;
                }
            }
        }
        Ok(Lu { n, lu, perm })
    }

    fn solve(&self, rhs: &[C<T>], m: usize) -> Vec<C<T>> {
        let n = self.n;
        let mut x = vec![C::zero(); n * m];
        for i in 0..n {
            let src = self.perm[i];
            x[i * m..(i + 1) * m].copy_from_slice(&rhs[src * m..(src + 1) * m]);
        }
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[i * n + k];
                if l.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let xk = x[k * m + j];
                    x[i * m + j] -= l * xk;
                }
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let u = self.lu[i * n + k];
                for j in 0..m {
                    let xk = x[k * m + j];
                    x[i * m + j] -= u * xk;
                }
            }
            let d = self.lu[i * n + i];
            for j in 0..m {
                x[i * m + j] /= d;
            }
        }
        x
    }
}
