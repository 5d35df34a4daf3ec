//! Dense complex-matrix arithmetic, Hermitian spectral decomposition and
//! density-matrix validation.

pub mod density;
pub mod linalg;
pub mod matrix;
pub mod observable;
pub mod random;

pub use density::{make_density, make_density_with, random_density, DensityMatrix};
pub use linalg::{hermitian_eigen, hermitian_eigenvalues, trace_norm, HermitianEigen};
pub use matrix::{hs_inner, inner, pauli, trace_product, ComplexMatrix};
pub use observable::{spectral_decompose, spectral_decompose_with, Observable};
