use num_complex::Complex;
use num_traits::Zero;

use super::linalg::hermitian_eigen;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real, Tolerances, C};

/// Hermitian matrix with a nondegenerate spectrum, together with its
/// ascending eigenvalues, orthonormal eigenvectors and rank-1 projectors.
///
/// Eigenvalue `k` is addressed by its sort index `k`; float labels are only
/// used for display.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable<T> {
    matrix: ComplexMatrix<T>,
    eigenvalues: Vec<T>,
    eigenvectors: Vec<Vec<C<T>>>,
    projectors: Vec<ComplexMatrix<T>>,
}

/// Decomposes `h` into an [`Observable`] using the default tolerances.
pub fn spectral_decompose<T: Real>(h: &ComplexMatrix<T>, tol_degen: T) -> Result<Observable<T>> {
    let tol = Tolerances {
        degen: tol_degen,
        ..Tolerances::default()
    };
    spectral_decompose_with(h, &tol)
}

pub fn spectral_decompose_with<T: Real>(
    h: &ComplexMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<Observable<T>> {
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = h.hermiticity_defect();
    if defect > tol.herm {
        return Err(Error::NotHermitian(to_f64(defect)));
    }
    let eig = hermitian_eigen(h);
    for w in eig.values.windows(2) {
        if w[1] - w[0] <= tol.degen {
            return Err(Error::DegenerateSpectrum(to_f64(w[0]), to_f64(w[1])));
        }
    }
    let eigenvectors: Vec<Vec<C<T>>> = eig.vectors.into_iter().map(fix_phase).collect();
    let projectors = eigenvectors
        .iter()
        .map(|v| ComplexMatrix::outer(v, v))
        .collect();
    Ok(Observable {
        matrix: h.clone(),
        eigenvalues: eig.values,
        eigenvectors,
        projectors,
    })
}

/// Rotates the global phase so that the first component of (near-)maximal
/// modulus is real and positive.
fn fix_phase<T: Real>(mut v: Vec<C<T>>) -> Vec<C<T>> {
    let max = v.iter().fold(T::zero(), |a, z| a.max(z.norm()));
    if max == T::zero() {
        return v;
    }
    let cutoff = max * (T::one() - T::epsilon() * lit(1e3));
    let pivot = v.iter().position(|z| z.norm() >= cutoff).unwrap_or(0);
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[pivot] = Complex::new(v[pivot].re, T::zero());
    v
}

impl<T: Real> Observable<T> {
    /// Observable with eigenbasis given by the columns of `basis` (assumed
    /// orthonormal) and the listed eigenvalues.
    pub fn from_eigenbasis(
        basis: &ComplexMatrix<T>,
        eigenvalues: &[T],
        tol: &Tolerances<T>,
    ) -> Result<Self> {
        let d = basis.dim();
        if eigenvalues.len() != d {
            return Err(Error::DimensionMismatch(d, eigenvalues.len()));
        }
        let mut m = ComplexMatrix::zeros(d);
        for (k, &lam) in eigenvalues.iter().enumerate() {
            let col: Vec<C<T>> = (0..d).map(|i| basis[(i, k)]).collect();
            m = &m + &ComplexMatrix::outer(&col, &col).scale_real(lam);
        }
        let m = (&m + &m.adjoint()).scale_real(lit(0.5));
        spectral_decompose_with(&m, tol)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &[C<T>] {
        &self.eigenvectors[k]
    }

    pub fn eigenvectors(&self) -> &[Vec<C<T>>] {
        &self.eigenvectors
    }

    pub fn projector(&self, k: usize) -> &ComplexMatrix<T> {
        &self.projectors[k]
    }

    pub fn projectors(&self) -> &[ComplexMatrix<T>] {
        &self.projectors
    }

    /// `f(self) = sum_k f_k Pi_k` for a coefficient per eigenvalue index.
    pub fn function_of(&self, coeffs: &[C<T>]) -> ComplexMatrix<T> {
        assert_eq!(coeffs.len(), self.dim());
        self.projectors
            .iter()
            .zip(coeffs)
            .fold(ComplexMatrix::zeros(self.dim()), |acc, (p, &f)| {
                if f.is_zero() {
                    acc
                } else {
                    &acc + &p.scale(f)
                }
            })
    }

    /// Diagonal weights `<phi_k, rho phi_k>` (real part).
    pub fn diagonal_weights(&self, rho: &ComplexMatrix<T>) -> Vec<T> {
        self.eigenvectors
            .iter()
            .map(|v| rho.sandwich(v, v).re)
            .collect()
    }

    /// Largest deviation from `sum Pi = I`, `Pi_j Pi_k = delta Pi_k`, and
    /// `sum lambda Pi = M`, in Frobenius norm.
    pub fn invariant_defect(&self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        let sum = self
            .projectors
            .iter()
            .fold(ComplexMatrix::zeros(d), |acc, p| &acc + p);
        worst = worst.max(sum.distance(&ComplexMatrix::identity(d)));
        for (j, pj) in self.projectors.iter().enumerate() {
            for (k, pk) in self.projectors.iter().enumerate() {
                let prod = pj * pk;
                let expect = if j == k { pk.clone() } else { ComplexMatrix::zeros(d) };
                worst = worst.max(prod.distance(&expect));
            }
        }
        let coeffs: Vec<C<T>> = self
            .eigenvalues
            .iter()
            .map(|&l| Complex::new(l, T::zero()))
            .collect();
        worst.max(self.function_of(&coeffs).distance(&self.matrix))
    }

    /// Index of an eigenvalue given by value, within `tol`.
    pub fn index_of(&self, value: T, tol: T) -> Option<usize> {
        self.eigenvalues.iter().position(|&l| (l - value).abs() <= tol)
    }
}
