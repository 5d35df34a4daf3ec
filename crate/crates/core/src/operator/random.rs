//! Seeded random matrices. All draws go through `ChaCha8Rng` so a seed fixes
//! the output on every platform.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{inner, ComplexMatrix};
use crate::scalar::{lit, Real, C};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal: real and imaginary parts i.i.d. N(0, 1/2).
pub fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex::new(lit(re * s), lit(im * s))
}

/// Uniform draw from the closed unit disk.
pub fn unit_disk<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let r: f64 = rng.random::<f64>().sqrt();
    let phi: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    Complex::new(lit(r * phi.cos()), lit(r * phi.sin()))
}

/// Complex Ginibre matrix.
pub fn ginibre<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(dim, |_, _| complex_normal(rng))
}

/// Random Hermitian matrix `(G + G^dag) / 2`.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = ginibre::<T, R>(dim, rng);
    (&g + &g.adjoint()).scale_real(lit(0.5))
}

/// Haar-distributed unitary: Gram-Schmidt on the columns of a Ginibre draw,
/// which leaves the implicit triangular factor with a positive diagonal.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = ginibre::<T, R>(dim, rng);
    let columns = gram_schmidt((0..dim).map(|j| (0..dim).map(|i| g[(i, j)]).collect()).collect());
    ComplexMatrix::from_fn(dim, |i, j| columns[j][i])
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
pub fn gram_schmidt<T: Real>(mut cols: Vec<Vec<C<T>>>) -> Vec<Vec<C<T>>> {
    for j in 0..cols.len() {
        for _ in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj = inner(&done[k], &rest[0]);
                for (x, q) in rest[0].iter_mut().zip(&done[k]) {
                    *x -= q * proj;
                }
            }
        }
        let norm = cols[j].iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    cols
}
