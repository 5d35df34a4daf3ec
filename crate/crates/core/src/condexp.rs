//! Quantum conditional expectations onto the algebra of functions of a
//! nondegenerate observable `B`.
//!
//! For `rho` with strictly positive diagonal weights `w_y = <phi_y, rho phi_y>`:
//!
//! - left:  `f(y) = <phi_y, X rho phi_y> / w_y` (the weak values),
//! - right: `f(y) = <phi_y, rho X phi_y> / w_y`,
//! - alpha: `alpha * left + (1 - alpha) * right`, the minimizer of the
//!   interpolated form (the quadratic part `sum w_y |f(y)|^2` is shared by
//!   all kinds, so only the linear term mixes).

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::OperatorFrame;
use crate::operator::linalg::{trace_norm, DenseSystem};
use crate::operator::matrix::{trace_product, ComplexMatrix};
use crate::operator::{DensityMatrix, Observable};
use crate::quasiprob::{distribution, symbol};
use crate::scalar::{lit, to_f64, Real, C};

/// Diagonal weights at or below this are treated as zero.
pub const D_B_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerProductKind<T> {
    Left,
    Right,
    Alpha(T),
}

impl<T: Real> InnerProductKind<T> {
    pub fn alpha(a: T) -> Result<Self> {
        if a >= T::zero() && a <= T::one() {
            Ok(InnerProductKind::Alpha(a))
        } else {
            Err(Error::InvalidAlpha(to_f64(a)))
        }
    }

    /// Weight of the left form; the right form gets `1 - weight`.
    pub fn left_weight(&self) -> T {
        match *self {
            InnerProductKind::Left => T::one(),
            InnerProductKind::Right => T::zero(),
            InnerProductKind::Alpha(a) => a,
        }
    }
}

impl<T: Real> std::fmt::Display for InnerProductKind<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InnerProductKind::Left => f.write_str("left"),
            InnerProductKind::Right => f.write_str("right"),
            InnerProductKind::Alpha(a) => write!(f, "alpha({a})"),
        }
    }
}

/// `sum_y f(y) Pi_y` together with its coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalInBasis<T> {
    basis: Observable<T>,
    coeffs: Vec<C<T>>,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DiagonalInBasis<T> {
    pub fn new(basis: &Observable<T>, coeffs: Vec<C<T>>) -> Self {
        let matrix = basis.function_of(&coeffs);
        DiagonalInBasis {
            basis: basis.clone(),
            coeffs,
            matrix,
        }
    }

    pub fn basis(&self) -> &Observable<T> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// `max_y |f(y) - g(y)|`
    pub fn coeff_distance(&self, other: &Self) -> T {
        coeff_distance(&self.coeffs, &other.coeffs)
    }

    /// `f(B) * self`, computed on coefficients.
    pub fn premultiply(&self, f: &[C<T>]) -> Self {
        Self::new(
            &self.basis,
            self.coeffs.iter().zip(f).map(|(a, b)| a * b).collect(),
        )
    }

    pub fn adjoint(&self) -> Self {
        Self::new(&self.basis, self.coeffs.iter().map(|z| z.conj()).collect())
    }

    /// `||M - M^dag||_F`
    pub fn hermiticity_defect(&self) -> T {
        self.matrix.hermiticity_defect()
    }
}

pub fn coeff_distance<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc.max((x - y).norm()))
}

/// True iff every diagonal weight `<phi_y, rho phi_y>` exceeds `tol`.
pub fn in_d_b<T: Real>(rho: &DensityMatrix<T>, b: &Observable<T>, tol: T) -> bool {
    rho.dim() == b.dim() && b.diagonal_weights(rho.matrix()).iter().all(|&w| w > tol)
}

fn require_d_b<T: Real>(rho: &DensityMatrix<T>, b: &Observable<T>) -> Result<Vec<T>> {
    if rho.dim() != b.dim() {
        return Err(Error::DimensionMismatch(b.dim(), rho.dim()));
    }
    let weights = b.diagonal_weights(rho.matrix());
    if let Some((index, &w)) = weights
        .iter()
        .enumerate()
        .find(|(_, &w)| !(w > lit(D_B_TOL)))
    {
        return Err(Error::NotInDB {
            index,
            weight: to_f64(w),
        });
    }
    Ok(weights)
}

/// Left `Tr(rho X^dag X')`, right `Tr(rho X' X^dag)`, or their
/// `alpha`-weighted mix.
pub fn sesquilinear<T: Real>(
    kind: InnerProductKind<T>,
    rho: &DensityMatrix<T>,
    x: &ComplexMatrix<T>,
    xp: &ComplexMatrix<T>,
) -> Result<C<T>> {
    x.same_dim(xp)?;
    if rho.dim() != x.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), x.dim()));
    }
    let xd = x.adjoint();
    let left = || trace_product(rho.matrix(), &(&xd * xp));
    let right = || trace_product(rho.matrix(), &(xp * &xd));
    Ok(match kind {
        InnerProductKind::Left => left(),
        InnerProductKind::Right => right(),
        InnerProductKind::Alpha(a) => left().scale(a) + right().scale(T::one() - a),
    })
}

/// Closed-form conditional expectation.
pub fn cond_exp_closed<T: Real>(
    x: &ComplexMatrix<T>,
    b: &Observable<T>,
    rho: &DensityMatrix<T>,
    kind: InnerProductKind<T>,
) -> Result<DiagonalInBasis<T>> {
    let weights = require_d_b(rho, b)?;
    x.same_dim(rho.matrix())?;
    let x_rho = x * rho.matrix();
    let rho_x = rho.matrix() * x;
    let a = kind.left_weight();
    let coeffs = b
        .eigenvectors()
        .iter()
        .zip(&weights)
        .map(|(phi, &w)| {
            let left = x_rho.sandwich(phi, phi);
            let right = rho_x.sandwich(phi, phi);
            match kind {
                InnerProductKind::Left => left.unscale(w),
                InnerProductKind::Right => right.unscale(w),
                InnerProductKind::Alpha(_) => (left.scale(a) + right.scale(T::one() - a)).unscale(w),
            }
        })
        .collect();
    Ok(DiagonalInBasis::new(b, coeffs))
}

/// `f -> <X - f(B), X - f(B)>_kind` evaluated through [`sesquilinear`].
pub fn objective<T: Real>(
    kind: InnerProductKind<T>,
    x: &ComplexMatrix<T>,
    b: &Observable<T>,
    rho: &DensityMatrix<T>,
    coeffs: &[C<T>],
) -> Result<T> {
    let diff = x - &b.function_of(coeffs);
    Ok(sesquilinear(kind, rho, &diff, &diff)?.re)
}

/// Minimizes [`objective`] over `f: sigma(B) -> C` by solving the normal
/// equations `sum_y' <Pi_y, Pi_y'> f(y') = <Pi_y, X>` assembled from the
/// sesquilinear form itself, without using the weak-value formula.
pub fn minimize_oracle<T: Real>(
    x: &ComplexMatrix<T>,
    b: &Observable<T>,
    rho: &DensityMatrix<T>,
    kind: InnerProductKind<T>,
) -> Result<DiagonalInBasis<T>> {
    require_d_b(rho, b)?;
    let d = b.dim();
    let mut gram = DenseSystem::zeros(d);
    let mut rhs = Vec::with_capacity(d);
    for y in 0..d {
        for yp in 0..d {
            gram.set(y, yp, sesquilinear(kind, rho, b.projector(y), b.projector(yp))?);
        }
        rhs.push(sesquilinear(kind, rho, b.projector(y), x)?);
    }
    let coeffs = gram.solve(&rhs, 1)?;
    Ok(DiagonalInBasis::new(b, coeffs))
}

/// Conditional expectation induced by a Born-compatible frame with dual:
/// `g(b) = sum_a conj(Q~_ab(X^dag)) Q_ab(rho) / <phi_b, rho phi_b>`.
pub fn q_cond_exp<T: Real>(
    frame: &OperatorFrame<T>,
    x: &ComplexMatrix<T>,
    rho: &DensityMatrix<T>,
) -> Result<DiagonalInBasis<T>> {
    if frame.dual().is_none() {
        return Err(Error::MissingDual);
    }
    let b = frame.pair().b();
    let weights = require_d_b(rho, b)?;
    let q = distribution(frame, rho)?;
    let sym = symbol(frame, &x.adjoint())?;
    let d = frame.dim();
    let coeffs = (0..d)
        .map(|ib| {
            let num = (0..d).fold(C::zero(), |acc, ia| acc + sym.get(ia, ib).conj() * q.get(ia, ib));
            num.unscale(weights[ib])
        })
        .collect();
    Ok(DiagonalInBasis::new(b, coeffs))
}

/// `|Tr(rho E^Q(X|B)) - Tr(rho X)|`
pub fn iterated_expectation_residual<T: Real>(
    frame: &OperatorFrame<T>,
    x: &ComplexMatrix<T>,
    rho: &DensityMatrix<T>,
) -> Result<T> {
    let e = q_cond_exp(frame, x, rho)?;
    Ok((rho.expectation(e.matrix()) - rho.expectation(x)).norm())
}

/// `max_ab |Q_ab(rho) - Tr(rho E^Q(S_ab^dag | B))|`
pub fn joint_recovery_residual<T: Real>(frame: &OperatorFrame<T>, rho: &DensityMatrix<T>) -> Result<T> {
    let q = distribution(frame, rho)?;
    let mut worst = T::zero();
    for (k, s) in frame.elements().iter().enumerate() {
        let e = q_cond_exp(frame, &s.adjoint(), rho)?;
        worst = worst.max((q.values()[k] - rho.expectation(e.matrix())).norm());
    }
    Ok(worst)
}

/// Mixes in the projectors of the unsupported eigenvalues:
/// `rho_eps = (rho + eps sum_{y in I0} Pi_y) / (1 + eps |I0|)` with
/// `I0 = {y : <phi_y, rho phi_y> <= D_B_TOL}`.
pub fn regularize<T: Real>(rho: &DensityMatrix<T>, b: &Observable<T>, eps: T) -> Result<DensityMatrix<T>> {
    if !(eps > T::zero()) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("regularization eps = {eps}")));
    }
    if rho.dim() != b.dim() {
        return Err(Error::DimensionMismatch(b.dim(), rho.dim()));
    }
    let unsupported: Vec<usize> = b
        .diagonal_weights(rho.matrix())
        .iter()
        .enumerate()
        .filter(|(_, &w)| w <= lit(D_B_TOL))
        .map(|(y, _)| y)
        .collect();
    if unsupported.is_empty() {
        return Ok(rho.clone());
    }
    let n = T::from_usize(unsupported.len()).unwrap();
    let sum = unsupported
        .iter()
        .fold(ComplexMatrix::zeros(b.dim()), |acc, &y| &acc + b.projector(y));
    let m = (rho.matrix() + &sum.scale_real(eps)).scale_real(T::one() / (T::one() + eps * n));
    Ok(DensityMatrix::new_unchecked(m))
}

/// `||rho - sigma||_1`
pub fn trace_distance<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> T {
    trace_norm(&(rho.matrix() - sigma.matrix()))
}
