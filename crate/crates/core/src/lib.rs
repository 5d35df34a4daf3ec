//! Quasiprobability representations of finite-dimensional quantum mechanics
//! built from operator frames.
//!
//! The crate covers
//!
//! - dense complex linear algebra and Hermitian spectral decomposition ([`operator`]),
//! - finite classical probability and conditional expectation ([`classical`]),
//! - operator frames on the joint spectrum of two observables, their duals and
//!   Born compatibility ([`frame`]),
//! - quasiprobability distributions, symbols and the Kirkwood-Dirac closed
//!   forms ([`quasiprob`]),
//! - left/right/interpolated quantum conditional expectations and the
//!   frame-induced conditional expectation ([`condexp`]),
//! - randomized verification of the pull-through characterizations ([`suite`]).
//!
//! All numerics are generic over the real scalar (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod condexp;
pub mod error;
pub mod frame;
pub mod operator;
pub mod quasiprob;
pub mod scalar;
pub mod suite;

pub use error::{Error, Result};
pub use scalar::{Real, Tolerances, C};

pub use operator::{ComplexMatrix, DensityMatrix, Observable};

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;

pub type Matrix64 = operator::ComplexMatrix<f64>;
pub type Matrix32 = operator::ComplexMatrix<f32>;
pub type Observable64 = operator::Observable<f64>;
pub type Observable32 = operator::Observable<f32>;
pub type Density64 = operator::DensityMatrix<f64>;
pub type Density32 = operator::DensityMatrix<f32>;
pub type QuasiDistribution64 = quasiprob::QuasiDistribution<f64>;
pub type OperatorSymbol64 = quasiprob::OperatorSymbol<f64>;
pub type DiagonalInBasis64 = condexp::DiagonalInBasis<f64>;
pub type InnerProductKind64 = condexp::InnerProductKind<f64>;
pub type ObservablePair64 = frame::ObservablePair<f64>;
pub type OperatorFrame64 = frame::OperatorFrame<f64>;
pub type Tolerances64 = scalar::Tolerances<f64>;
