use kdq_core::classical::{cond_exp, RandomVariable};
use kdq_core::condexp::{
    cond_exp_closed, in_d_b, iterated_expectation_residual, minimize_oracle, regularize, trace_distance,
    InnerProductKind,
};
use kdq_core::frame::{
    born_defect, dual_frame, frame_bounds, kd_frame, mix_frames, perturb_born_compatible, random_observable_pair,
    solve_dual, Side,
};
use kdq_core::operator::random::{ginibre, random_hermitian, rng_from_seed, unit_disk};
use kdq_core::operator::{pauli, random_density, spectral_decompose, ComplexMatrix, DensityMatrix};
use kdq_core::quasiprob::{distribution, kd_distribution};
use kdq_core::suite::{
    closed_pull_through_residual, draw_triple, q_pull_through_residual, random_classical_instance, SuiteConfig,
};
use kdq_core::{Complex64, Error};
use proptest::prelude::*;

fn kinds() -> [InnerProductKind<f64>; 3] {
    [InnerProductKind::Left, InnerProductKind::Right, InnerProductKind::Alpha(0.5)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classical_characterization(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let (p, x, y) = random_classical_instance(&mut rng, false).unwrap();
        let e = cond_exp(&p, &x, &y).unwrap();
        let levels = y.range();
        let fl: Vec<Complex64> = levels.iter().map(|_| unit_disk(&mut rng)).collect();
        let fy = y.map(|v| fl[levels.iter().position(|l| l == v).unwrap()]);
        prop_assert!(cond_exp(&p, &fy.mul(&x), &y).unwrap().max_distance(&fy.mul(&e)) < 1e-12);
        prop_assert!((p.expectation(&e) - p.expectation(&x)).norm() < 1e-12);
        let one = RandomVariable::new(vec![Complex64::new(1.0, 0.0); p.len()]);
        prop_assert_eq!(cond_exp(&p, &one, &y).unwrap(), one);
    }

    #[test]
    fn real_in_real_out(seed in any::<u64>()) {
        let (p, x, y) = random_classical_instance(&mut rng_from_seed(seed), true).unwrap();
        prop_assert!(cond_exp(&p, &x, &y).unwrap().max_imaginary() < 1e-13);
    }

    #[test]
    fn dual_of_dual_is_the_frame(seed in any::<u64>(), d in 2usize..=5) {
        let pair = random_observable_pair::<f64>(d, seed).unwrap();
        let f = kd_frame(&pair, Side::Left);
        let back = solve_dual(f.dual().unwrap()).unwrap();
        for (s, t) in f.elements().iter().zip(&back) {
            prop_assert!(s.distance(t) < 1e-9);
        }
        prop_assert!(f.biorthogonality_residual().unwrap() < 1e-10);
    }

    #[test]
    fn mixing_and_perturbing_keep_born_marginals(seed in any::<u64>(), d in 2usize..=4, alpha in 0.0f64..=1.0) {
        let pair = random_observable_pair::<f64>(d, seed).unwrap();
        let l = kd_frame(&pair, Side::Left);
        let r = kd_frame(&pair, Side::Right);
        prop_assert!(born_defect(&mix_frames(&l, &r, alpha).unwrap()) < 1e-12);
        prop_assert!(born_defect(&perturb_born_compatible(&l, 0.05, seed).unwrap()) < 1e-12);
    }

    #[test]
    fn kd_frame_route_matches_closed_form(seed in any::<u64>(), d in 2usize..=6) {
        let pair = random_observable_pair::<f64>(d, seed).unwrap();
        let rho = random_density::<f64>(d, seed ^ 1).unwrap();
        for side in [Side::Left, Side::Right] {
            let a = distribution(&kd_frame(&pair, side), &rho).unwrap();
            prop_assert!(a.max_distance(&kd_distribution(&pair, &rho, side)) < 1e-12);
        }
    }

    #[test]
    fn kd_of_a_diagonal_state_is_a_probability(seed in any::<u64>(), d in 2usize..=5) {
        let pair = random_observable_pair::<f64>(d, seed).unwrap();
        let w: Vec<f64> = (0..d).map(|k| (k + 1) as f64).collect();
        let total: f64 = w.iter().sum();
        let w: Vec<Complex64> = w.iter().map(|x| Complex64::new(x / total, 0.0)).collect();
        let rho_a = kdq_core::operator::make_density(pair.a().function_of(&w)).unwrap();
        for side in [Side::Left, Side::Right] {
            for q in kd_distribution(&pair, &rho_a, side).values() {
                prop_assert!(q.im.abs() < 1e-12 && q.re > -1e-12);
            }
        }
    }

    #[test]
    fn closed_forms_match_oracle(seed in any::<u64>(), d in 2usize..=6) {
        let pair = random_observable_pair::<f64>(d, seed).unwrap();
        let rho = random_density::<f64>(d, seed ^ 2).unwrap();
        let x = ginibre::<f64, _>(d, &mut rng_from_seed(seed ^ 3));
        for kind in kinds() {
            let c = cond_exp_closed(&x, pair.b(), &rho, kind).unwrap();
            let o = minimize_oracle(&x, pair.b(), &rho, kind).unwrap();
            prop_assert!(c.coeff_distance(&o) < 1e-9);
        }
    }

    #[test]
    fn duality_units_and_weak_values(seed in any::<u64>(), d in 2usize..=6) {
        let pair = random_observable_pair::<f64>(d, seed).unwrap();
        let b = pair.b();
        let rho = random_density::<f64>(d, seed ^ 4).unwrap();
        let x = ginibre::<f64, _>(d, &mut rng_from_seed(seed ^ 5));
        let r = cond_exp_closed(&x, b, &rho, InnerProductKind::Right).unwrap();
        let l = cond_exp_closed(&x.adjoint(), b, &rho, InnerProductKind::Left).unwrap();
        prop_assert!(r.coeff_distance(&l.adjoint()) < 1e-12);

        for kind in kinds() {
            let e = cond_exp_closed(&ComplexMatrix::identity(d), b, &rho, kind).unwrap();
            prop_assert!(e.matrix().distance(&ComplexMatrix::identity(d)) < 1e-12);
        }

        let left = cond_exp_closed(&x, b, &rho, InnerProductKind::Left).unwrap();
        let xr = &x * rho.matrix();
        for (k, phi) in b.eigenvectors().iter().enumerate() {
            let weak = xr.sandwich(phi, phi) / rho.matrix().sandwich(phi, phi);
            prop_assert!((left.coeffs()[k] - weak).norm() <= 1e-14 * weak.norm().max(1.0));
        }
    }

    #[test]
    fn closed_form_characterization(seed in any::<u64>(), d in 2usize..=5) {
        let cfg = SuiteConfig::default();
        let pair = random_observable_pair::<f64>(d, seed).unwrap();
        let b = pair.b();
        let t = draw_triple(b, &mut rng_from_seed(seed ^ 6), &cfg).unwrap();
        prop_assert!(closed_pull_through_residual(b, InnerProductKind::Left, Side::Left, &t).unwrap() < 1e-11);
        prop_assert!(closed_pull_through_residual(b, InnerProductKind::Right, Side::Right, &t).unwrap() < 1e-11);
        for kind in kinds() {
            let e = cond_exp_closed(&t.x, b, &t.rho, kind).unwrap();
            prop_assert!((t.rho.expectation(e.matrix()) - t.rho.expectation(&t.x)).norm() < 1e-11);
        }
    }

    #[test]
    fn kd_frames_pull_through_on_their_side(seed in any::<u64>(), d in 2usize..=5) {
        let cfg = SuiteConfig::default();
        let pair = random_observable_pair::<f64>(d, seed).unwrap();
        let t = draw_triple(pair.b(), &mut rng_from_seed(seed ^ 7), &cfg).unwrap();
        prop_assert!(q_pull_through_residual(&kd_frame(&pair, Side::Left), Side::Left, &t).unwrap() < 1e-10);
        prop_assert!(q_pull_through_residual(&kd_frame(&pair, Side::Right), Side::Right, &t).unwrap() < 1e-10);
    }

    #[test]
    fn perturbed_frames_keep_iterated_expectation(seed in any::<u64>(), d in 2usize..=4) {
        let pair = random_observable_pair::<f64>(d, seed).unwrap();
        let f = dual_frame(&perturb_born_compatible(&kd_frame(&pair, Side::Left), 1e-2, seed).unwrap()).unwrap();
        let rho = random_density::<f64>(d, seed ^ 8).unwrap();
        let x = ginibre::<f64, _>(d, &mut rng_from_seed(seed ^ 9));
        prop_assert!(iterated_expectation_residual(&f, &x, &rho).unwrap() < 1e-9);
    }

    #[test]
    fn regularize_bound_on_log_grid(seed in any::<u64>(), exponent in -8i32..=0) {
        let eps = 10f64.powi(exponent);
        let pair = random_observable_pair::<f64>(3, seed).unwrap();
        let b = pair.b();
        let rho = DensityMatrix::pure(b.eigenvector(1));
        let r = regularize(&rho, b, eps).unwrap();
        let n0 = 2.0;
        prop_assert!(trace_distance(&r, &rho) <= 2.0 * eps * n0 / (1.0 + eps * n0) + 1e-12);
        prop_assert!(in_d_b(&r, b, 1e-12));
    }
}

#[test]
fn perturbed_frames_violate_left_pull_through() {
    let cfg = SuiteConfig::default();
    let pair = random_observable_pair::<f64>(3, 40).unwrap();
    for (k, magnitude) in [1e-3, 1e-2, 1e-1].into_iter().enumerate() {
        let f = dual_frame(&perturb_born_compatible(&kd_frame(&pair, Side::Left), magnitude, k as u64).unwrap())
            .unwrap();
        let mut rng = rng_from_seed(k as u64);
        let worst = (0..20)
            .map(|_| q_pull_through_residual(&f, Side::Left, &draw_triple(pair.b(), &mut rng, &cfg).unwrap()).unwrap())
            .fold(0.0, f64::max);
        assert!(worst > 1e-6, "magnitude {magnitude}: {worst}");
    }
}

#[test]
fn alpha_closed_form_agrees_with_oracle_on_many_instances() {
    let mut hits = 0;
    for seed in 0..120u64 {
        let d = 2 + (seed % 5) as usize;
        let pair = random_observable_pair::<f64>(d, seed).unwrap();
        let rho = random_density::<f64>(d, seed + 1000).unwrap();
        let x = ginibre::<f64, _>(d, &mut rng_from_seed(seed + 2000));
        let alpha = (seed % 11) as f64 / 10.0;
        let kind = InnerProductKind::alpha(alpha).unwrap();
        let c = cond_exp_closed(&x, pair.b(), &rho, kind).unwrap();
        let o = minimize_oracle(&x, pair.b(), &rho, kind).unwrap();
        assert!(c.coeff_distance(&o) < 1e-9, "seed {seed}");
        hits += 1;
    }
    assert!(hits >= 100);
}

#[test]
fn spanning_is_what_decides_the_dual() {
    let pair = random_observable_pair::<f64>(3, 3).unwrap();
    let f = kd_frame(&pair, Side::Left);
    let (c1, _) = frame_bounds(&f);
    assert!(c1 > 0.0 && dual_frame(&f).is_ok());

    let z = spectral_decompose(&pauli::z(), 1e-8).unwrap();
    let x = spectral_decompose(&pauli::x(), 1e-8).unwrap();
    let qubit = kdq_core::frame::check_pair(z, x, 1e-8).unwrap();
    let half = mix_frames(&kd_frame(&qubit, Side::Left), &kd_frame(&qubit, Side::Right), 0.5).unwrap();
    let (c1, c2) = frame_bounds(&half);
    assert!(c1 <= c2 * 1e-12);
    assert!(matches!(dual_frame(&half), Err(Error::SingularGram(_))));
}

#[test]
fn non_self_adjoint_witness_exists() {
    let b = random_observable_pair::<f64>(2, 0).unwrap().b().clone();
    let mut rng = rng_from_seed(0);
    let found = (0..200).any(|seed| {
        let rho = random_density::<f64>(2, seed).unwrap();
        let x = random_hermitian::<f64, _>(2, &mut rng);
        cond_exp_closed(&x, &b, &rho, InnerProductKind::Left).unwrap().hermiticity_defect() > 1e-6
    });
    assert!(found);
}
