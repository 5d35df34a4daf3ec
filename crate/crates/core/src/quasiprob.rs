//! Quasiprobability distributions `Q_ab(rho) = Tr(rho S_ab^dag)` and symbols
//! `Q~_ab(X) = Tr(X T_ab^dag)` of a frame/dual pair.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::frame::{born_defect, ObservablePair, OperatorFrame, Side};
use crate::operator::matrix::{hs_inner, inner, ComplexMatrix};
use crate::operator::DensityMatrix;
use crate::scalar::{lit, to_f64, Real, C};

/// Deviation of `sum Q` from 1 above which [`distribution`] fails outright.
pub const NORMALIZATION_HARD_LIMIT: f64 = 1e-8;

/// Values on `sigma(A) x sigma(B)`, row-major over `(a, b)` indices.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiDistribution<T> {
    pair: ObservablePair<T>,
    values: Vec<C<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSymbol<T> {
    pair: ObservablePair<T>,
    values: Vec<C<T>>,
}

macro_rules! table_accessors {
    ($ty:ident) => {
        impl<T: Real> $ty<T> {
            pub fn pair(&self) -> &ObservablePair<T> {
                &self.pair
            }

            pub fn values(&self) -> &[C<T>] {
                &self.values
            }

            pub fn get(&self, ia: usize, ib: usize) -> C<T> {
                self.values[ia * self.pair.dim() + ib]
            }

            /// Largest entrywise distance to another table.
            pub fn max_distance(&self, other: &Self) -> T {
                self.values
                    .iter()
                    .zip(&other.values)
                    .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()))
            }
        }
    };
}

table_accessors!(QuasiDistribution);
table_accessors!(OperatorSymbol);

impl<T: Real> QuasiDistribution<T> {
    pub fn total(&self) -> C<T> {
        self.values.iter().fold(C::zero(), |acc, v| acc + v)
    }
}

/// `Q_ab(rho) = Tr(rho S_ab^dag)`.
///
/// The frame is trusted to be Born compatible; a total mass off by more than
/// [`NORMALIZATION_HARD_LIMIT`] is reported as [`Error::NotNormalized`], and
/// smaller deviations above rounding level are logged.
pub fn distribution<T: Real>(frame: &OperatorFrame<T>, rho: &DensityMatrix<T>) -> Result<QuasiDistribution<T>> {
    if rho.dim() != frame.dim() {
        return Err(Error::DimensionMismatch(frame.dim(), rho.dim()));
    }
    let values: Vec<C<T>> = frame
        .elements()
        .iter()
        .map(|s| hs_inner(s, rho.matrix()).expect("dimension checked"))
        .collect();
    let out = QuasiDistribution {
        pair: frame.pair().clone(),
        values,
    };
    let dev = (out.total() - C::new(T::one(), T::zero())).norm();
    if dev > lit(NORMALIZATION_HARD_LIMIT) {
        return Err(Error::NotNormalized(to_f64(dev)));
    }
    if dev > lit(1e-10) {
        log::warn!("quasiprobability normalization off by {:e}", to_f64(dev));
    }
    Ok(out)
}

/// [`distribution`] after verifying Born compatibility within `tol`.
pub fn distribution_checked<T: Real>(
    frame: &OperatorFrame<T>,
    rho: &DensityMatrix<T>,
    tol: T,
) -> Result<QuasiDistribution<T>> {
    if born_defect(frame) > tol {
        return Err(Error::NotBornCompatible);
    }
    distribution(frame, rho)
}

/// `Q~_ab(X) = Tr(X T_ab^dag)`.
pub fn symbol<T: Real>(frame: &OperatorFrame<T>, x: &ComplexMatrix<T>) -> Result<OperatorSymbol<T>> {
    let dual = frame.dual().ok_or(Error::MissingDual)?;
    if x.dim() != frame.dim() {
        return Err(Error::DimensionMismatch(frame.dim(), x.dim()));
    }
    Ok(OperatorSymbol {
        pair: frame.pair().clone(),
        values: dual
            .iter()
            .map(|t| hs_inner(t, x).expect("dimension checked"))
            .collect(),
    })
}

/// `sum_ab conj(Q~_ab(X)) Q_ab(rho)`, which reproduces `Tr(rho X^dag)`.
pub fn overlap<T: Real>(sym: &OperatorSymbol<T>, dist: &QuasiDistribution<T>) -> Result<C<T>> {
    if sym.pair != dist.pair {
        return Err(Error::PairMismatch);
    }
    Ok(sym
        .values
        .iter()
        .zip(&dist.values)
        .fold(C::zero(), |acc, (s, q)| acc + s.conj() * q))
}

/// Sums over one index.
#[derive(Clone, Debug, PartialEq)]
pub struct Marginals<T> {
    /// `b -> sum_a Q_ab`
    pub over_a: Vec<C<T>>,
    /// `a -> sum_b Q_ab`
    pub over_b: Vec<C<T>>,
}

pub fn marginals<T: Real>(dist: &QuasiDistribution<T>) -> Marginals<T> {
    let d = dist.pair.dim();
    let over_a = (0..d)
        .map(|ib| (0..d).fold(C::zero(), |acc, ia| acc + dist.get(ia, ib)))
        .collect();
    let over_b = (0..d)
        .map(|ia| (0..d).fold(C::zero(), |acc, ib| acc + dist.get(ia, ib)))
        .collect();
    Marginals { over_a, over_b }
}

/// Kirkwood-Dirac distribution from eigenvector overlaps:
/// left `<phi_b, phi_a><phi_a, rho phi_b>`, right `<phi_a, phi_b><phi_b, rho phi_a>`.
pub fn kd_distribution<T: Real>(pair: &ObservablePair<T>, rho: &DensityMatrix<T>, side: Side) -> QuasiDistribution<T> {
    let d = pair.dim();
    let m = rho.matrix();
    let mut values = Vec::with_capacity(d * d);
    for ia in 0..d {
        let pa = pair.a().eigenvector(ia);
        for ib in 0..d {
            let pb = pair.b().eigenvector(ib);
            let v = match side {
                Side::Left => inner(pb, pa) * m.sandwich(pa, pb),
                Side::Right => inner(pa, pb) * m.sandwich(pb, pa),
            };
            values.push(v);
        }
    }
    QuasiDistribution {
        pair: pair.clone(),
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{check_pair, kd_frame, random_observable_pair};
    use crate::operator::{pauli, random_density, spectral_decompose};

    type Cx = C<f64>;

    fn zx() -> ObservablePair<f64> {
        check_pair(
            spectral_decompose(&pauli::z(), 1e-8).unwrap(),
            spectral_decompose(&pauli::x(), 1e-8).unwrap(),
            1e-8,
        )
        .unwrap()
    }

    fn ket0() -> DensityMatrix<f64> {
        DensityMatrix::pure(&[Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)])
    }

    fn plus_i() -> DensityMatrix<f64> {
        DensityMatrix::pure(&[Cx::new(1.0, 0.0), Cx::new(0.0, 1.0)])
    }

    // Index 1 of Z is +1 (|0>), index 1 of X is +1 (|+>).

    #[test]
    fn kd_left_of_ket0() {
        let q = distribution(&kd_frame(&zx(), Side::Left), &ket0()).unwrap();
        assert!((q.get(1, 1) - Cx::new(0.5, 0.0)).norm() < 1e-15);
        assert!((q.get(1, 0) - Cx::new(0.5, 0.0)).norm() < 1e-15);
        assert!(q.get(0, 0).norm() < 1e-15 && q.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn kd_left_of_plus_i_is_complex() {
        let q = distribution(&kd_frame(&zx(), Side::Left), &plus_i()).unwrap();
        assert!((q.get(1, 1) - Cx::new(0.25, -0.25)).norm() < 1e-15);
    }

    #[test]
    fn maximally_mixed_is_normalized() {
        let pair = random_observable_pair::<f64>(3, 0).unwrap();
        let q = distribution(&kd_frame(&pair, Side::Right), &DensityMatrix::maximally_mixed(3)).unwrap();
        assert!((q.total() - Cx::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn non_born_frame_hits_normalization_limit() {
        let f = kd_frame(&zx(), Side::Left);
        let broken = f.with_element(3, f.elements()[3].scale_real(2.0));
        let err = distribution(&broken, &DensityMatrix::maximally_mixed(2)).unwrap_err();
        assert!(matches!(err, Error::NotNormalized(_)));
        assert_eq!(
            distribution_checked(&broken, &DensityMatrix::maximally_mixed(2), 1e-10).unwrap_err(),
            Error::NotBornCompatible
        );
    }

    #[test]
    fn distribution_dimension_mismatch() {
        let err = distribution(&kd_frame(&zx(), Side::Left), &DensityMatrix::maximally_mixed(3));
        assert_eq!(err.unwrap_err(), Error::DimensionMismatch(2, 3));
    }

    #[test]
    fn symbol_of_identity_is_one() {
        let s = symbol(&kd_frame(&zx(), Side::Left), &ComplexMatrix::identity(2)).unwrap();
        assert!(s.values().iter().all(|v| (v - Cx::new(1.0, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn symbol_factorizes_in_the_matching_order() {
        let pair = random_observable_pair::<f64>(3, 2).unwrap();
        let f = [Cx::new(0.3, 1.0), Cx::new(-2.0, 0.5), Cx::new(1.0, 0.0)];
        let g = [Cx::new(1.5, -0.2), Cx::new(0.0, 1.0), Cx::new(-0.7, 0.4)];
        let fa = pair.a().function_of(&f);
        let gb = pair.b().function_of(&g);
        let left = symbol(&kd_frame(&pair, Side::Left), &(&fa * &gb)).unwrap();
        let right = symbol(&kd_frame(&pair, Side::Right), &(&gb * &fa)).unwrap();
        for (ia, x) in f.iter().enumerate() {
            for (ib, y) in g.iter().enumerate() {
                assert!((left.get(ia, ib) - x * y).norm() < 1e-12);
                assert!((right.get(ia, ib) - y * x).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn symbol_requires_dual() {
        let f = kd_frame(&zx(), Side::Left);
        let bare = f.with_element(0, f.elements()[0].clone());
        assert_eq!(
            symbol(&bare, &ComplexMatrix::identity(2)).unwrap_err(),
            Error::MissingDual
        );
    }

    #[test]
    fn overlap_of_identity_is_one() {
        let f = kd_frame(&zx(), Side::Left);
        let rho = random_density::<f64>(2, 3).unwrap();
        let v = overlap(
            &symbol(&f, &ComplexMatrix::identity(2)).unwrap(),
            &distribution(&f, &rho).unwrap(),
        )
        .unwrap();
        assert!((v - Cx::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn overlap_rejects_mismatched_pairs() {
        let f = kd_frame(&zx(), Side::Left);
        let g = kd_frame(&random_observable_pair::<f64>(2, 1).unwrap(), Side::Left);
        let rho = DensityMatrix::maximally_mixed(2);
        let err = overlap(
            &symbol(&f, &ComplexMatrix::identity(2)).unwrap(),
            &distribution(&g, &rho).unwrap(),
        );
        assert_eq!(err.unwrap_err(), Error::PairMismatch);
    }

    #[test]
    fn marginals_of_ket0() {
        let m = marginals(&distribution(&kd_frame(&zx(), Side::Left), &ket0()).unwrap());
        assert!((m.over_a[0] - Cx::new(0.5, 0.0)).norm() < 1e-15);
        assert!((m.over_a[1] - Cx::new(0.5, 0.0)).norm() < 1e-15);
        assert!((m.over_b[1] - Cx::new(1.0, 0.0)).norm() < 1e-15);
        assert!(m.over_b[0].norm() < 1e-15);
    }

    #[test]
    fn marginals_of_maximally_mixed_are_uniform() {
        let pair = random_observable_pair::<f64>(4, 6).unwrap();
        let m = marginals(&distribution(&kd_frame(&pair, Side::Left), &DensityMatrix::maximally_mixed(4)).unwrap());
        for v in m.over_a.iter().chain(&m.over_b) {
            assert!((v - Cx::new(0.25, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_frame_route_on_qubit() {
        for side in [Side::Left, Side::Right] {
            for rho in [ket0(), plus_i()] {
                let a = kd_distribution(&zx(), &rho, side);
                let b = distribution(&kd_frame(&zx(), side), &rho).unwrap();
                assert!(a.max_distance(&b) < 1e-12);
            }
        }
    }

    #[test]
    fn eigenstate_of_a_gives_nonnegative_row() {
        let pair = random_observable_pair::<f64>(3, 7).unwrap();
        let a0 = 1;
        let rho = DensityMatrix::pure(pair.a().eigenvector(a0));
        let q = kd_distribution(&pair, &rho, Side::Left);
        for ia in 0..3 {
            for ib in 0..3 {
                let want = if ia == a0 { pair.overlap(a0, ib).norm_sqr() } else { 0.0 };
                assert!((q.get(ia, ib) - Cx::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn left_and_right_are_conjugate_for_plus_i() {
        let l = kd_distribution(&zx(), &plus_i(), Side::Left);
        let r = kd_distribution(&zx(), &plus_i(), Side::Right);
        for (a, b) in l.values().iter().zip(r.values()) {
            assert!((a.conj() - b).norm() < 1e-15);
        }
        assert!(l.values().iter().any(|v| v.im.abs() > 0.1));
    }
}
