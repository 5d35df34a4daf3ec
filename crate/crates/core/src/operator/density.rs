use num_complex::Complex;

use super::linalg::hermitian_eigenvalues;
use super::matrix::ComplexMatrix;
use super::random::{ginibre, rng_from_seed};
use crate::error::{Error, Result};
use crate::scalar::{to_f64, Real, Tolerances};

/// Positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `I / d`
    pub fn maximally_mixed(dim: usize) -> Self {
        let w = T::one() / T::from_usize(dim).unwrap();
        DensityMatrix {
            matrix: ComplexMatrix::identity(dim).scale_real(w),
        }
    }

    /// `|psi><psi|` for a (not necessarily normalized) vector.
    pub fn pure(psi: &[Complex<T>]) -> Self {
        let norm2 = psi.iter().fold(T::zero(), |a, z| a + z.norm_sqr());
        DensityMatrix {
            matrix: ComplexMatrix::outer(psi, psi).scale_real(T::one() / norm2),
        }
    }

    /// Wraps a matrix the caller has already validated.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix<T>) -> Self {
        DensityMatrix { matrix }
    }

    /// `<A>_rho = Tr(rho A)`
    pub fn expectation(&self, a: &ComplexMatrix<T>) -> Complex<T> {
        super::matrix::trace_product(&self.matrix, a)
    }
}

pub fn make_density<T: Real>(m: ComplexMatrix<T>) -> Result<DensityMatrix<T>> {
    make_density_with(m, &Tolerances::default())
}

/// Validates Hermiticity, positivity and unit trace, in that order.
pub fn make_density_with<T: Real>(
    m: ComplexMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<DensityMatrix<T>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = m.hermiticity_defect();
    if defect > tol.herm {
        return Err(Error::NotHermitian(to_f64(defect)));
    }
    let min = hermitian_eigenvalues(&m)
        .first()
        .copied()
        .unwrap_or_else(T::zero);
    if min < -tol.psd {
        return Err(Error::NotPositive(to_f64(min)));
    }
    let tr = m.trace();
    if (tr.re - T::one()).abs() > tol.num || tr.im.abs() > tol.num {
        return Err(Error::TraceNotOne(to_f64(tr.re)));
    }
    Ok(DensityMatrix { matrix: m })
}

/// Seeded full-rank state `G G^dag / Tr(G G^dag)` with `G` complex Ginibre.
pub fn random_density<T: Real>(dim: usize, seed: u64) -> Result<DensityMatrix<T>> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: dim });
    }
    let mut rng = rng_from_seed(seed);
    Ok(random_density_from(dim, &mut rng))
}

pub fn random_density_from<T: Real, R: rand::Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
) -> DensityMatrix<T> {
    let g = ginibre::<T, R>(dim, rng);
    let ggd = &g * &g.adjoint();
    let tr = ggd.trace().re;
    let m = ggd.scale_real(T::one() / tr);
    // exact Hermitian symmetrization so validation never trips on rounding
    let m = (&m + &m.adjoint()).scale_real(T::from_f64(0.5).unwrap());
    DensityMatrix { matrix: m }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximally_mixed_qubit_is_valid() {
        assert!(make_density(ComplexMatrix::<f64>::diag_real(&[0.5, 0.5])).is_ok());
    }

    #[test]
    fn negative_eigenvalue_rejected() {
        let err = make_density(ComplexMatrix::<f64>::diag_real(&[1.5, -0.5])).unwrap_err();
        assert!(matches!(err, Error::NotPositive(_)));
    }

    #[test]
    fn wrong_trace_rejected() {
        let err = make_density(ComplexMatrix::<f64>::diag_real(&[0.6, 0.6])).unwrap_err();
        assert!(matches!(err, Error::TraceNotOne(t) if (t - 1.2).abs() < 1e-12));
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::<f64>::from_real_rows(&[&[0.5, 0.3], &[0.0, 0.5]]);
        assert!(matches!(make_density(m).unwrap_err(), Error::NotHermitian(_)));
    }

    #[test]
    fn random_density_validates() {
        let rho = random_density::<f64>(2, 0).unwrap();
        assert!(make_density(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn random_density_is_deterministic() {
        let a = random_density::<f64>(4, 1).unwrap();
        let b = random_density::<f64>(4, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_density_full_rank() {
        let rho = random_density::<f64>(3, 2).unwrap();
        assert!(hermitian_eigenvalues(rho.matrix()).iter().all(|&l| l > 0.0));
    }

    #[test]
    fn random_density_requires_dim_two() {
        assert!(matches!(
            random_density::<f64>(1, 0).unwrap_err(),
            Error::DimensionTooSmall { .. }
        ));
    }
}
