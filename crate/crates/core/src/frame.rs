//! Operator frames indexed by the joint spectrum `sigma(A) x sigma(B)`.
//!
//! Elements are stored row-major over `(a, b)` eigenvalue indices, both in
//! ascending eigenvalue order: element `k` is `(k / d, k % d)`.

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::linalg::{hermitian_eigenvalues, DenseSystem};
use crate::operator::matrix::{hs_inner, inner, ComplexMatrix};
use crate::operator::random::{ginibre, haar_unitary, rng_from_seed};
use crate::operator::Observable;
use crate::scalar::{lit, to_f64, Real, Tolerances, C};

/// Gram matrices with condition number above this are treated as singular.
pub const GRAM_CONDITION_CAP: f64 = 1e12;

/// A perturbed frame counts as degenerate once `C1 / C2` drops below this.
pub const PERTURBATION_GUARD: f64 = 1e-6;

/// Overlap floor used when sampling random observable pairs.
pub const RANDOM_PAIR_MIN_OVERLAP: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Two observables of equal dimension whose eigenvectors pairwise overlap.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservablePair<T> {
    a: Observable<T>,
    b: Observable<T>,
    overlaps: Vec<C<T>>,
}

/// Builds the pair, failing on the first `(a, b)` with `|<phi_a, phi_b>| <= tol_overlap`.
pub fn check_pair<T: Real>(a: Observable<T>, b: Observable<T>, tol_overlap: T) -> Result<ObservablePair<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let d = a.dim();
    let mut overlaps = Vec::with_capacity(d * d);
    for ia in 0..d {
        for ib in 0..d {
            let o = inner(a.eigenvector(ia), b.eigenvector(ib));
            if o.norm() <= tol_overlap {
                return Err(Error::VanishingOverlap(ia, ib));
            }
            overlaps.push(o);
        }
    }
    Ok(ObservablePair { a, b, overlaps })
}

impl<T: Real> ObservablePair<T> {
    pub fn a(&self) -> &Observable<T> {
        &self.a
    }

    pub fn b(&self) -> &Observable<T> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// `<phi_a, phi_b>`
    pub fn overlap(&self, ia: usize, ib: usize) -> C<T> {
        self.overlaps[ia * self.dim() + ib]
    }

    pub fn overlaps(&self) -> &[C<T>] {
        &self.overlaps
    }

    pub fn min_overlap(&self) -> T {
        self.overlaps
            .iter()
            .fold(T::infinity(), |acc, o| acc.min(o.norm()))
    }

    fn same_as(&self, other: &Self) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let tol = lit::<T>(1e-12).max(T::epsilon() * lit(100.0));
        self.a.matrix().distance(other.a.matrix()) <= tol
            && self.b.matrix().distance(other.b.matrix()) <= tol
    }
}

/// Seeded random pair: `A` has a Haar-random eigenbasis `V`, `B` has eigenbasis
/// `U V` for an independent Haar `U`. Pairs with an overlap below
/// [`RANDOM_PAIR_MIN_OVERLAP`] are redrawn.
pub fn random_observable_pair<T: Real>(dim: usize, seed: u64) -> Result<ObservablePair<T>> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: dim });
    }
    let mut rng = rng_from_seed(seed);
    let tol = Tolerances::default();
    loop {
        let v = haar_unitary::<T, _>(dim, &mut rng);
        let u = haar_unitary::<T, _>(dim, &mut rng);
        let uv = &u * &v;
        let a = Observable::from_eigenbasis(&v, &spread_spectrum(dim, &mut rng), &tol)?;
        let b = Observable::from_eigenbasis(&uv, &spread_spectrum(dim, &mut rng), &tol)?;
        match check_pair(a, b, lit(RANDOM_PAIR_MIN_OVERLAP)) {
            Ok(pair) => return Ok(pair),
            Err(Error::VanishingOverlap(..)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Eigenvalues `k + u_k` with `u_k` uniform on `[-0.3, 0.3]`: always separated by 0.4.
fn spread_spectrum<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<T> {
    (0..dim)
        .map(|k| lit(k as f64 + 0.6 * (rng.random::<f64>() - 0.5)))
        .collect()
}

/// Family `{S_ab}` on the joint spectrum, optionally with its dual `{T_ab}`
/// and frame bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorFrame<T> {
    pair: ObservablePair<T>,
    elements: Vec<ComplexMatrix<T>>,
    dual: Option<Vec<ComplexMatrix<T>>>,
    bounds: Option<(T, T)>,
}

impl<T: Real> OperatorFrame<T> {
    /// Wraps `d^2` elements in row-major `(a, b)` order.
    pub fn from_elements(pair: ObservablePair<T>, elements: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let d = pair.dim();
        if elements.len() != d * d {
            return Err(Error::WrongFrameSize {
                expected: d * d,
                got: elements.len(),
            });
        }
        if let Some(bad) = elements.iter().find(|e| e.dim() != d) {
            return Err(Error::DimensionMismatch(d, bad.dim()));
        }
        Ok(OperatorFrame {
            pair,
            elements,
            dual: None,
            bounds: None,
        })
    }

    /// Attaches a dual family without checking biorthogonality.
    pub fn with_dual(mut self, dual: Vec<ComplexMatrix<T>>) -> Result<Self> {
        if dual.len() != self.elements.len() {
            return Err(Error::WrongFrameSize {
                expected: self.elements.len(),
                got: dual.len(),
            });
        }
        self.dual = Some(dual);
        Ok(self)
    }

    pub fn pair(&self) -> &ObservablePair<T> {
        &self.pair
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }

    pub fn elements(&self) -> &[ComplexMatrix<T>] {
        &self.elements
    }

    pub fn element(&self, ia: usize, ib: usize) -> &ComplexMatrix<T> {
        &self.elements[ia * self.dim() + ib]
    }

    pub fn dual(&self) -> Option<&[ComplexMatrix<T>]> {
        self.dual.as_deref()
    }

    pub fn dual_element(&self, ia: usize, ib: usize) -> Option<&ComplexMatrix<T>> {
        self.dual.as_ref().map(|t| &t[ia * self.dim() + ib])
    }

    pub fn bounds(&self) -> Option<(T, T)> {
        self.bounds
    }

    /// Returns a copy with `elements[k]` replaced; dual and bounds are dropped.
    pub fn with_element(&self, k: usize, m: ComplexMatrix<T>) -> Self {
        let mut elements = self.elements.clone();
        elements[k] = m;
        OperatorFrame {
            pair: self.pair.clone(),
            elements,
            dual: None,
            bounds: None,
        }
    }

    /// `max |Tr(T_k' S_k^dag) - delta_kk'|`, or `None` without a dual.
    pub fn biorthogonality_residual(&self) -> Option<T> {
        let dual = self.dual.as_ref()?;
        let mut worst = T::zero();
        for (k, s) in self.elements.iter().enumerate() {
            for (kp, t) in dual.iter().enumerate() {
                // Tr(T S^dag) = <S, T>_HS
                let v = hs_inner(s, t).expect("same dimension");
                let target = if k == kp { C::one() } else { C::zero() };
                worst = worst.max((v - target).norm());
            }
        }
        Some(worst)
    }
}

/// `S_ab = Pi_a Pi_b` (left) or `Pi_b Pi_a` (right), with the closed-form
/// dual `T_ab = S_ab / |<phi_a, phi_b>|^2` attached.
pub fn kd_frame<T: Real>(pair: &ObservablePair<T>, side: Side) -> OperatorFrame<T> {
    let d = pair.dim();
    let mut elements = Vec::with_capacity(d * d);
    let mut dual = Vec::with_capacity(d * d);
    for ia in 0..d {
        for ib in 0..d {
            let pa = pair.a.projector(ia);
            let pb = pair.b.projector(ib);
            let s = match side {
                Side::Left => pa * pb,
                Side::Right => pb * pa,
            };
            let w = pair.overlap(ia, ib).norm_sqr();
            dual.push(s.scale_real(T::one() / w));
            elements.push(s);
        }
    }
    OperatorFrame {
        pair: pair.clone(),
        elements,
        dual: Some(dual),
        bounds: None,
    }
}

/// Gram matrix `G_jk = Tr(S_j^dag S_k)`.
pub fn gram_matrix<T: Real>(elements: &[ComplexMatrix<T>]) -> DenseSystem<T> {
    let n = elements.len();
    let mut g = DenseSystem::zeros(n);
    for j in 0..n {
        for k in j..n {
            let v = hs_inner(&elements[j], &elements[k]).expect("same dimension");
            g.set(j, k, v);
            g.set(k, j, v.conj());
        }
    }
    g
}

/// Spectral condition number of a Hermitian positive semidefinite matrix;
/// infinite when the smallest eigenvalue is not positive.
pub fn condition_number<T: Real>(g: &DenseSystem<T>) -> T {
    let eig = hermitian_eigenvalues(&g.to_matrix());
    let lo = *eig.first().unwrap();
    let hi = *eig.last().unwrap();
    if lo <= T::zero() {
        T::infinity()
    } else {
        hi / lo
    }
}

/// Solves for the unique dual `T` with `Tr(T_k' S_k^dag) = delta_kk'`.
///
/// With `T_k' = sum_j c_jk' S_j` the relation reads `G C = I`, so the
/// coefficients are the columns of `G^{-1}`.
pub fn dual_frame<T: Real>(frame: &OperatorFrame<T>) -> Result<OperatorFrame<T>> {
    let dual = solve_dual(&frame.elements)?;
    Ok(OperatorFrame {
        pair: frame.pair.clone(),
        elements: frame.elements.clone(),
        dual: Some(dual),
        bounds: frame.bounds,
    })
}

/// Dual family of an arbitrary basis of `L(H)`.
pub fn solve_dual<T: Real>(elements: &[ComplexMatrix<T>]) -> Result<Vec<ComplexMatrix<T>>> {
    let n = elements.len();
    let d = elements.first().map(|e| e.dim()).unwrap_or(0);
    if n != d * d || n == 0 {
        return Err(Error::WrongFrameSize {
            expected: d * d,
            got: n,
        });
    }
    let g = gram_matrix(elements);
    let cond = condition_number(&g);
    if !(cond <= lit(GRAM_CONDITION_CAP)) {
        return Err(Error::SingularGram(to_f64(cond)));
    }
    let coeffs = g.inverse().map_err(|_| Error::SingularGram(to_f64(cond)))?;
    Ok((0..n)
        .map(|kp| {
            elements
                .iter()
                .enumerate()
                .fold(ComplexMatrix::zeros(d), |acc, (j, s)| {
                    &acc + &s.scale(coeffs.at(j, kp))
                })
        })
        .collect())
}

/// Matrix of the frame operator `X -> sum_k S_k Tr(S_k^dag X)` acting on
/// row-major vectorized `X`.
pub fn frame_operator<T: Real>(elements: &[ComplexMatrix<T>]) -> ComplexMatrix<T> {
    let n = elements.first().map(|e| e.dim() * e.dim()).unwrap_or(0);
    let mut f = ComplexMatrix::zeros(n);
    for s in elements {
        let v = s.as_slice();
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..n {
                f[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    f
}

/// Smallest and largest eigenvalue of the frame operator. `C1 > 0` iff the
/// family spans `L(H)`; a degenerate family reports `C1 = 0` (clamped from
/// rounding noise) rather than failing.
pub fn frame_bounds<T: Real>(frame: &OperatorFrame<T>) -> (T, T) {
    let eig = hermitian_eigenvalues(&frame_operator(&frame.elements));
    let hi = *eig.last().unwrap();
    let mut lo = *eig.first().unwrap();
    let noise = hi * T::epsilon() * lit((eig.len() * 4) as f64);
    if lo <= noise {
        lo = T::zero();
    }
    (lo, hi)
}

/// Returns a copy with frame bounds computed and stored.
pub fn with_bounds<T: Real>(frame: &OperatorFrame<T>) -> OperatorFrame<T> {
    let mut out = frame.clone();
    out.bounds = Some(frame_bounds(frame));
    out
}

/// Largest Frobenius defect of the two Born marginal identities
/// `sum_a S_ab^dag = Pi_b` and `sum_b S_ab^dag = Pi_a`.
pub fn born_defect<T: Real>(frame: &OperatorFrame<T>) -> T {
    let d = frame.dim();
    let mut worst = T::zero();
    for ib in 0..d {
        let sum = (0..d).fold(ComplexMatrix::zeros(d), |acc, ia| {
            &acc + &frame.element(ia, ib).adjoint()
        });
        worst = worst.max(sum.distance(frame.pair.b.projector(ib)));
    }
    for ia in 0..d {
        let sum = (0..d).fold(ComplexMatrix::zeros(d), |acc, ib| {
            &acc + &frame.element(ia, ib).adjoint()
        });
        worst = worst.max(sum.distance(frame.pair.a.projector(ia)));
    }
    worst
}

pub fn is_born_compatible<T: Real>(frame: &OperatorFrame<T>, tol: T) -> bool {
    born_defect(frame) <= tol
}

/// Elementwise `alpha F1 + (1 - alpha) F2`.
pub fn mix_frames<T: Real>(f1: &OperatorFrame<T>, f2: &OperatorFrame<T>, alpha: T) -> Result<OperatorFrame<T>> {
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidAlpha(to_f64(alpha)));
    }
    if !f1.pair.same_as(&f2.pair) || f1.elements.len() != f2.elements.len() {
        return Err(Error::PairMismatch);
    }
    let beta = T::one() - alpha;
    let elements = f1
        .elements
        .iter()
        .zip(&f2.elements)
        .map(|(s1, s2)| &s1.scale_real(alpha) + &s2.scale_real(beta))
        .collect();
    Ok(OperatorFrame {
        pair: f1.pair.clone(),
        elements,
        dual: None,
        bounds: None,
    })
}

/// Adds a seeded doubly centered perturbation (every row and column sum over
/// the `(a, b)` grid vanishes) of total Frobenius norm `magnitude`.
///
/// Born compatibility is preserved exactly. The output carries its frame
/// bounds but no dual; it is rejected when `C1 / C2` falls below
/// [`PERTURBATION_GUARD`].
pub fn perturb_born_compatible<T: Real>(
    frame: &OperatorFrame<T>,
    magnitude: T,
    seed: u64,
) -> Result<OperatorFrame<T>> {
    if magnitude == T::zero() {
        return Ok(frame.clone());
    }
    if !(magnitude > T::zero()) || !magnitude.is_finite() {
        return Err(Error::InvalidArgument(format!("perturbation magnitude {magnitude}")));
    }
    let d = frame.dim();
    let mut rng = rng_from_seed(seed);
    let raw: Vec<ComplexMatrix<T>> = (0..d * d).map(|_| ginibre(d, &mut rng)).collect();
    let delta = doubly_center(&raw, d);
    let norm = delta
        .iter()
        .fold(T::zero(), |acc, m| acc + m.frobenius_norm().powi(2))
        .sqrt();
    let s = magnitude / norm;
    let elements = frame
        .elements
        .iter()
        .zip(&delta)
        .map(|(e, p)| e + &p.scale_real(s))
        .collect();
    let candidate = OperatorFrame {
        pair: frame.pair.clone(),
        elements,
        dual: None,
        bounds: None,
    };
    let (c1, c2) = frame_bounds(&candidate);
    if !(c1 > c2 * lit(PERTURBATION_GUARD)) {
        return Err(Error::FrameDegenerated {
            c1: to_f64(c1),
            c2: to_f64(c2),
        });
    }
    Ok(OperatorFrame {
        bounds: Some((c1, c2)),
        ..candidate
    })
}

/// `D_ab = G_ab - mean_a G_ab - mean_b G_ab + mean_ab G_ab`
fn doubly_center<T: Real>(g: &[ComplexMatrix<T>], d: usize) -> Vec<ComplexMatrix<T>> {
    let inv = T::one() / T::from_usize(d).unwrap();
    let row_mean: Vec<ComplexMatrix<T>> = (0..d)
        .map(|ia| {
            (0..d)
                .fold(ComplexMatrix::zeros(d), |acc, ib| &acc + &g[ia * d + ib])
                .scale_real(inv)
        })
        .collect();
    let col_mean: Vec<ComplexMatrix<T>> = (0..d)
        .map(|ib| {
            (0..d)
                .fold(ComplexMatrix::zeros(d), |acc, ia| &acc + &g[ia * d + ib])
                .scale_real(inv)
        })
        .collect();
    let grand = row_mean
        .iter()
        .fold(ComplexMatrix::zeros(d), |acc, m| &acc + m)
        .scale_real(inv);
    (0..d * d)
        .map(|k| {
            let (ia, ib) = (k / d, k % d);
            &(&(&g[k] - &row_mean[ia]) - &col_mean[ib]) + &grand
        })
        .collect()
}

/// Normalized Pauli basis `{I, X, Y, Z} / sqrt 2`, an orthonormal (tight) frame on a qubit.
pub fn normalized_pauli_basis<T: Real>() -> Vec<ComplexMatrix<T>> {
    use crate::operator::pauli;
    let s = T::one() / lit::<T>(2.0).sqrt();
    [ComplexMatrix::identity(2), pauli::x(), pauli::y(), pauli::z()]
        .iter()
        .map(|m| m.scale_real(s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{pauli, spectral_decompose};

    fn obs(m: ComplexMatrix<f64>) -> Observable<f64> {
        spectral_decompose(&m, 1e-8).unwrap()
    }

    fn zx() -> ObservablePair<f64> {
        check_pair(obs(pauli::z()), obs(pauli::x()), 1e-8).unwrap()
    }

    #[test]
    fn z_x_pair_has_unbiased_overlaps() {
        let pair = zx();
        for o in pair.overlaps() {
            assert!((o.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn same_basis_has_vanishing_overlap() {
        let err = check_pair(obs(pauli::z()), obs(pauli::z()), 1e-8).unwrap_err();
        assert!(matches!(err, Error::VanishingOverlap(0, 1)));
    }

    #[test]
    fn rotated_z_pair_is_valid() {
        // Z rotated by pi/4 about y: cos(pi/4) Z + sin(pi/4) X
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rotated = &pauli::z::<f64>().scale_real(s) + &pauli::x::<f64>().scale_real(s);
        let pair = check_pair(obs(pauli::z()), obs(rotated), 1e-8).unwrap();
        // |<0|theta_+>| = cos(pi/8), |<0|theta_->| = sin(pi/8)
        let mut mags: Vec<f64> = pair.overlaps().iter().map(|o| o.norm()).collect();
        mags.sort_by(f64::total_cmp);
        let (lo, hi) = ((std::f64::consts::PI / 8.0).sin(), (std::f64::consts::PI / 8.0).cos());
        assert!((mags[0] - lo).abs() < 1e-12 && (mags[3] - hi).abs() < 1e-12);
    }

    #[test]
    fn pair_dimension_mismatch() {
        let z3 = obs(ComplexMatrix::diag_real(&[1.0, 2.0, 3.0]));
        assert!(matches!(
            check_pair(obs(pauli::z()), z3, 1e-8).unwrap_err(),
            Error::DimensionMismatch(2, 3)
        ));
    }

    #[test]
    fn kd_left_element_by_hand() {
        let f = kd_frame(&zx(), Side::Left);
        // a = +1 is index 1 (|0>), b = +1 is index 1 (|+>)
        let s = f.element(1, 1);
        let want = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.0, 0.0]]);
        assert!(s.distance(&want) < 1e-15);
    }

    #[test]
    fn kd_elements_sum_to_identity() {
        for side in [Side::Left, Side::Right] {
            let pair = random_observable_pair::<f64>(4, 8).unwrap();
            let f = kd_frame(&pair, side);
            let sum = f.elements().iter().fold(ComplexMatrix::zeros(4), |a, s| &a + s);
            assert!(sum.distance(&ComplexMatrix::identity(4)) < 1e-12);
        }
    }

    #[test]
    fn kd_closed_form_dual_is_biorthogonal() {
        let f = kd_frame(&zx(), Side::Left);
        assert!(f.biorthogonality_residual().unwrap() < 1e-12);
    }

    #[test]
    fn solved_dual_matches_kd_closed_form() {
        let closed = kd_frame(&zx(), Side::Left);
        let bare = OperatorFrame::from_elements(zx(), closed.elements().to_vec()).unwrap();
        let solved = dual_frame(&bare).unwrap();
        for (t, t0) in solved.dual().unwrap().iter().zip(closed.dual().unwrap()) {
            assert!(t.distance(t0) < 1e-10);
        }
    }

    #[test]
    fn repeated_element_is_singular() {
        let f = kd_frame(&zx(), Side::Left);
        let dup = f.with_element(1, f.elements()[0].clone());
        assert!(matches!(dual_frame(&dup).unwrap_err(), Error::SingularGram(_)));
    }

    #[test]
    fn half_mix_of_real_pair_is_singular() {
        // For real eigenbases the two KD frames are transposes of each other,
        // so the even mix lives in the symmetric matrices.
        let pair = zx();
        let mixed = mix_frames(&kd_frame(&pair, Side::Left), &kd_frame(&pair, Side::Right), 0.5).unwrap();
        assert!(is_born_compatible(&mixed, 1e-12));
        assert!(matches!(dual_frame(&mixed).unwrap_err(), Error::SingularGram(_)));
        assert_eq!(frame_bounds(&mixed).0, 0.0);
    }

    #[test]
    fn mixed_frame_dual_on_qutrit_pair() {
        let pair = random_observable_pair::<f64>(3, 5).unwrap();
        let mixed = mix_frames(&kd_frame(&pair, Side::Left), &kd_frame(&pair, Side::Right), 0.5).unwrap();
        let solved = dual_frame(&mixed).unwrap();
        assert!(solved.biorthogonality_residual().unwrap() < 1e-10);
    }

    #[test]
    fn half_mix_is_singular_for_every_qubit_pair() {
        for seed in 0..5 {
            let pair = random_observable_pair::<f64>(2, seed).unwrap();
            let l = kd_frame(&pair, Side::Left);
            let r = kd_frame(&pair, Side::Right);
            let half = mix_frames(&l, &r, 0.5).unwrap();
            assert!(matches!(dual_frame(&half), Err(Error::SingularGram(_))));
            let off_center = mix_frames(&l, &r, 0.4).unwrap();
            assert!(dual_frame(&off_center).unwrap().biorthogonality_residual().unwrap() < 1e-10);
        }
    }

    #[test]
    fn tight_frame_bounds_for_normalized_paulis() {
        let f = OperatorFrame::from_elements(zx(), normalized_pauli_basis()).unwrap();
        let (c1, c2) = frame_bounds(&f);
        assert!((c1 - 1.0).abs() < 1e-12 && (c2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kd_frame_bounds_positive() {
        let (c1, c2) = frame_bounds(&kd_frame(&zx(), Side::Left));
        assert!(c1 > 1e-3 && c1 <= c2);
    }

    #[test]
    fn zero_frame_reports_zero_bound() {
        let f = OperatorFrame::from_elements(zx(), vec![ComplexMatrix::zeros(2); 4]).unwrap();
        assert_eq!(frame_bounds(&f), (0.0, 0.0));
    }

    #[test]
    fn born_compatibility_checks() {
        let pair = zx();
        assert!(is_born_compatible(&kd_frame(&pair, Side::Left), 1e-12));
        assert!(is_born_compatible(&kd_frame(&pair, Side::Right), 1e-12));
        let left = kd_frame(&pair, Side::Left);
        let broken = left.with_element(3, left.elements()[3].scale_real(2.0));
        assert!(!is_born_compatible(&broken, 1e-10));
    }

    #[test]
    fn mix_endpoints_and_interior() {
        let pair = random_observable_pair::<f64>(3, 1).unwrap();
        let l = kd_frame(&pair, Side::Left);
        let r = kd_frame(&pair, Side::Right);
        let one = mix_frames(&l, &r, 1.0).unwrap();
        assert_eq!(one.elements(), l.elements());
        let half = mix_frames(&l, &r, 0.5).unwrap();
        assert!(is_born_compatible(&half, 1e-12));
        assert!(half.elements()[0].distance(&l.elements()[0]) > 1e-3);
        assert!(half.elements()[0].distance(&r.elements()[0]) > 1e-3);
        assert!(matches!(mix_frames(&l, &r, 1.5), Err(Error::InvalidAlpha(_))));
    }

    #[test]
    fn mix_rejects_mismatched_pairs() {
        let l = kd_frame(&zx(), Side::Left);
        let other = random_observable_pair::<f64>(2, 3).unwrap();
        let r = kd_frame(&other, Side::Right);
        assert_eq!(mix_frames(&l, &r, 0.5).unwrap_err(), Error::PairMismatch);
    }

    #[test]
    fn perturbation_zero_is_identity() {
        let f = kd_frame(&zx(), Side::Left);
        assert_eq!(perturb_born_compatible(&f, 0.0, 9).unwrap(), f);
    }

    #[test]
    fn small_perturbation_stays_born_compatible() {
        let f = kd_frame(&zx(), Side::Left);
        let p = perturb_born_compatible(&f, 1e-2, 9).unwrap();
        assert!(is_born_compatible(&p, 1e-12));
        let dev = p
            .elements()
            .iter()
            .zip(f.elements())
            .map(|(a, b)| (a - b).max_abs())
            .fold(0.0, f64::max);
        assert!(dev > 1e-3);
        assert!(p.bounds().unwrap().0 > 0.0);
    }

    #[test]
    fn huge_perturbation_degenerates() {
        let f = kd_frame(&zx(), Side::Left);
        assert!(matches!(
            perturb_born_compatible(&f, 1e3, 9).unwrap_err(),
            Error::FrameDegenerated { .. }
        ));
    }

    #[test]
    fn dual_of_dual_recovers_frame() {
        let pair = random_observable_pair::<f64>(3, 4).unwrap();
        let f = mix_frames(&kd_frame(&pair, Side::Left), &kd_frame(&pair, Side::Right), 0.3).unwrap();
        let t = solve_dual(f.elements()).unwrap();
        let s = solve_dual(&t).unwrap();
        for (a, b) in s.iter().zip(f.elements()) {
            assert!(a.distance(b) < 1e-9);
        }
    }

    #[test]
    fn wrong_frame_size_rejected() {
        let err = OperatorFrame::from_elements(zx(), vec![ComplexMatrix::identity(2)]).unwrap_err();
        assert_eq!(err, Error::WrongFrameSize { expected: 4, got: 1 });
    }
}
