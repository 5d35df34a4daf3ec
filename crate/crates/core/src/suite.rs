//! Seeded randomized verification of the structural theorems.
//!
//! Every suite draws its instances sequentially from one `ChaCha8` stream
//! seeded by the caller, so a report is a pure function of its arguments.
//! Reports are `f64` only.

use std::ops::RangeInclusive;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classical::{
    best_predictor, cond_exp, joint_from_cond, joint_mass, ComplexVariable, FiniteProbSpace, RandomVariable,
    RealVariable,
};
use crate::condexp::{
    cond_exp_closed, in_d_b, iterated_expectation_residual, joint_recovery_residual, q_cond_exp, regularize,
    trace_distance, InnerProductKind,
};
use crate::error::Result;
use crate::frame::{
    dual_frame, kd_frame, mix_frames, perturb_born_compatible, random_observable_pair, solve_dual, ObservablePair,
    OperatorFrame, Side,
};
use crate::operator::density::random_density_from;
use crate::operator::random::{complex_normal, ginibre, random_hermitian, rng_from_seed, unit_disk, SeededRng};
use crate::operator::{pauli, ComplexMatrix, DensityMatrix, Observable};
use crate::quasiprob::{distribution, marginals, overlap, symbol};
use crate::scalar::C;

/// Interpolation weights used for the mixed members of [`frame_families`].
/// `0.5` is avoided: on a qubit the even mix never has a dual.
pub const FAMILY_ALPHAS: [f64; 5] = [0.1, 0.3, 0.4, 0.7, 0.9];

/// Perturbation magnitudes used for the perturbed members of [`frame_families`].
pub const FAMILY_MAGNITUDES: [f64; 5] = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1];

const SAMPLING_NOTE: &str = "states are sampled; the statement for all states is not certified";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Identities expected to hold to rounding (overlap, marginals, duals, pull-through at the KD endpoints).
    pub tol_exact: f64,
    /// Closed-form and classical identities.
    pub tol_tight: f64,
    /// Minimizer agreement and frame-induced expectations on general frames.
    pub tol_loose: f64,
    /// Joint-mass enumeration and reality of real conditional expectations.
    pub tol_enumeration: f64,
    pub tol_regularization: f64,
    /// Interior points of an interpolation scan must stay above this.
    pub separation_floor: f64,
    /// A property counts as violated above this.
    pub violation_floor: f64,
    /// Applied to every sampled state before conditioning on `B`.
    pub regularize_eps: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            tol_exact: 1e-10,
            tol_tight: 1e-11,
            tol_loose: 1e-9,
            tol_enumeration: 1e-13,
            tol_regularization: 1e-12,
            separation_floor: 1e-5,
            violation_floor: 1e-6,
            regularize_eps: 1e-6,
        }
    }
}

/// `Holds` passes when the residual is below the threshold, `Violated` when
/// it is above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Holds,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub expectation: Expectation,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(label: impl Into<String>, expectation: Expectation, residual: f64, threshold: f64) -> Self {
        let pass = match expectation {
            Expectation::Holds => residual < threshold,
            Expectation::Violated => residual > threshold,
        };
        Check {
            label: label.into(),
            expectation,
            residual,
            threshold,
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub instances: usize,
    /// Largest residual among `Holds` checks.
    pub max_residual: f64,
    /// Smallest residual among `Violated` checks.
    pub min_violation: Option<f64>,
    pub pass: bool,
    pub seed: u64,
    pub dim: Option<usize>,
    pub config: SuiteConfig,
    pub checks: Vec<Check>,
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn new(
        theorem: impl Into<String>,
        instances: usize,
        seed: u64,
        dim: Option<usize>,
        config: &SuiteConfig,
        checks: Vec<Check>,
    ) -> Self {
        let max_residual = checks
            .iter()
            .filter(|c| c.expectation == Expectation::Holds)
            .fold(0.0_f64, |m, c| if c.residual.is_nan() { f64::NAN } else { m.max(c.residual) });
        let min_violation = checks
            .iter()
            .filter(|c| c.expectation == Expectation::Violated)
            .map(|c| c.residual)
            .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.min(r))));
        VerificationReport {
            theorem: theorem.into(),
            instances,
            max_residual,
            min_violation,
            pass: !checks.is_empty() && checks.iter().all(|c| c.pass),
            seed,
            dim,
            config: *config,
            checks,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// One sampled `(rho, X, f)` triple.
#[derive(Clone, Debug)]
pub struct Triple {
    pub rho: DensityMatrix<f64>,
    pub x: ComplexMatrix<f64>,
    pub f: Vec<C<f64>>,
}

/// Full-rank Ginibre state (regularized against `b`), Ginibre `X`, and `f`
/// uniform on the unit disk.
pub fn draw_triple(b: &Observable<f64>, rng: &mut SeededRng, cfg: &SuiteConfig) -> Result<Triple> {
    let d = b.dim();
    let rho = regularize(&random_density_from(d, rng), b, cfg.regularize_eps)?;
    let x = ginibre(d, rng);
    let f = (0..d).map(|_| unit_disk(rng)).collect();
    Ok(Triple { rho, x, f })
}

fn moved(b: &Observable<f64>, side: Side, t: &Triple) -> ComplexMatrix<f64> {
    let fb = b.function_of(&t.f);
    match side {
        Side::Left => &fb * &t.x,
        Side::Right => &t.x * &fb,
    }
}

/// `max_y |E(f(B) X | B)(y) - f(y) E(X | B)(y)|` (left) or the same with `X f(B)` (right),
/// for the frame-induced conditional expectation.
pub fn q_pull_through_residual(frame: &OperatorFrame<f64>, side: Side, t: &Triple) -> Result<f64> {
    let lhs = q_cond_exp(frame, &moved(frame.pair().b(), side, t), &t.rho)?;
    let rhs = q_cond_exp(frame, &t.x, &t.rho)?.premultiply(&t.f);
    Ok(lhs.coeff_distance(&rhs))
}

/// Same as [`q_pull_through_residual`] for the closed-form conditional expectation.
pub fn closed_pull_through_residual(
    b: &Observable<f64>,
    kind: InnerProductKind<f64>,
    side: Side,
    t: &Triple,
) -> Result<f64> {
    let lhs = cond_exp_closed(&moved(b, side, t), b, &t.rho, kind)?;
    let rhs = cond_exp_closed(&t.x, b, &t.rho, kind)?.premultiply(&t.f);
    Ok(lhs.coeff_distance(&rhs))
}

fn threshold(expectation: Expectation, cfg: &SuiteConfig) -> f64 {
    match expectation {
        Expectation::Holds => cfg.tol_exact,
        Expectation::Violated => cfg.violation_floor,
    }
}

fn max_pull_through(frame: &OperatorFrame<f64>, side: Side, trials: usize, seed: u64, cfg: &SuiteConfig) -> Result<f64> {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let t = draw_triple(frame.pair().b(), &mut rng, cfg)?;
        worst = worst.max(q_pull_through_residual(frame, side, &t)?);
    }
    Ok(worst)
}

/// Pull-through of the frame-induced conditional expectation on one side.
pub fn verify_pull_through(
    frame: &OperatorFrame<f64>,
    side: Side,
    expectation: Expectation,
    trials: usize,
    seed: u64,
    cfg: &SuiteConfig,
) -> Result<VerificationReport> {
    let worst = max_pull_through(frame, side, trials, seed, cfg)?;
    let check = Check::new(format!("{side} pull-through"), expectation, worst, threshold(expectation, cfg));
    Ok(VerificationReport::new("pull-through", trials, seed, Some(frame.dim()), cfg, vec![check]).with_note(SAMPLING_NOTE))
}

/// Scans `alpha S_left + (1 - alpha) S_right`: left pull-through must hold
/// only at `alpha = 1`, right pull-through only at `alpha = 0`, and both must
/// stay above the separation floor everywhere else. Each point reuses the
/// same random triples.
pub fn verify_kd_uniqueness_scan(
    pair: &ObservablePair<f64>,
    alphas: &[f64],
    trials: usize,
    seed: u64,
    cfg: &SuiteConfig,
) -> Result<VerificationReport> {
    let left = kd_frame(pair, Side::Left);
    let right = kd_frame(pair, Side::Right);
    let mut checks = Vec::with_capacity(2 * alphas.len());
    for &alpha in alphas {
        let frame = dual_frame(&mix_frames(&left, &right, alpha)?)?;
        for (side, endpoint) in [(Side::Left, 1.0), (Side::Right, 0.0)] {
            let worst = max_pull_through(&frame, side, trials, seed, cfg)?;
            let check = if alpha == endpoint {
                Check::new(format!("alpha={alpha} {side}"), Expectation::Holds, worst, cfg.tol_exact)
            } else {
                Check::new(format!("alpha={alpha} {side}"), Expectation::Violated, worst, cfg.separation_floor)
            };
            checks.push(check);
        }
    }
    Ok(
        VerificationReport::new("kd-uniqueness", trials * alphas.len(), seed, Some(pair.dim()), cfg, checks)
            .with_note(SAMPLING_NOTE),
    )
}

/// Pull-through and iterated expectation for the closed form of `kind`.
///
/// `left` must satisfy left pull-through and violate right pull-through,
/// `right` the reverse, and interior `alpha` must violate both. The
/// iterated expectation holds for every kind.
pub fn verify_characterization(
    b: &Observable<f64>,
    kind: InnerProductKind<f64>,
    trials: usize,
    seed: u64,
    cfg: &SuiteConfig,
) -> Result<VerificationReport> {
    let a = kind.left_weight();
    let expect = |side: Side| {
        let holds = match side {
            Side::Left => a == 1.0,
            Side::Right => a == 0.0,
        };
        if holds {
            Expectation::Holds
        } else {
            Expectation::Violated
        }
    };
    let mut rng = rng_from_seed(seed);
    let (mut left, mut right, mut iterated) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..trials {
        let t = draw_triple(b, &mut rng, cfg)?;
        left = left.max(closed_pull_through_residual(b, kind, Side::Left, &t)?);
        right = right.max(closed_pull_through_residual(b, kind, Side::Right, &t)?);
        let e = cond_exp_closed(&t.x, b, &t.rho, kind)?;
        iterated = iterated.max((t.rho.expectation(e.matrix()) - t.rho.expectation(&t.x)).norm());
    }
    let side_check = |side: Side, r: f64| {
        let e = expect(side);
        let thr = match e {
            Expectation::Holds => cfg.tol_tight,
            Expectation::Violated => cfg.violation_floor,
        };
        Check::new(format!("{side} pull-through"), e, r, thr)
    };
    let checks = vec![
        side_check(Side::Left, left),
        side_check(Side::Right, right),
        Check::new("iterated expectation", Expectation::Holds, iterated, cfg.tol_tight),
    ];
    Ok(
        VerificationReport::new(format!("characterization {kind}"), trials, seed, Some(b.dim()), cfg, checks)
            .with_note(SAMPLING_NOTE),
    )
}

/// Random finite probability space with `2..=8` points, a random
/// conditioning variable and a complex (real on odd trials) variable with
/// repeated values.
pub fn random_classical_instance(
    rng: &mut SeededRng,
    real: bool,
) -> Result<(FiniteProbSpace<f64>, ComplexVariable<f64>, RealVariable<f64>)> {
    let n = rng.random_range(2..=8usize);
    let raw: Vec<f64> = (0..n).map(|_| 0.05 + rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let p = FiniteProbSpace::new((0..n as i64).collect(), raw.iter().map(|w| w / total).collect())?;
    let levels = rng.random_range(1..=n);
    let y = RandomVariable::from_fn(n, |_| rng.random_range(0..levels) as f64);
    let pool: Vec<C<f64>> = (0..rng.random_range(1..=n))
        .map(|_| {
            let z: C<f64> = complex_normal(rng);
            if real {
                C::new(z.re, 0.0)
            } else {
                z
            }
        })
        .collect();
    let x = RandomVariable::from_fn(n, |_| pool[rng.random_range(0..pool.len())]);
    Ok((p, x, y))
}

/// Best predictor against conditional expectation, pull-through, iterated
/// expectation, joint recovery and reality on random finite spaces.
pub fn verify_classical(trials: usize, seed: u64, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = rng_from_seed(seed);
    let (mut predictor, mut pull, mut iterated, mut joint, mut imag) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for trial in 0..trials {
        let real = trial % 2 == 1;
        let (p, x, y) = random_classical_instance(&mut rng, real)?;
        let e = cond_exp(&p, &x, &y)?;
        predictor = predictor.max(best_predictor(&p, &x, &y)?.max_distance(&e));

        let levels = y.range();
        let f_levels: Vec<C<f64>> = levels.iter().map(|_| unit_disk(&mut rng)).collect();
        let fy = y.map(|v| f_levels[levels.iter().position(|l| l == v).expect("level present")]);
        pull = pull.max(cond_exp(&p, &fy.mul(&x), &y)?.max_distance(&fy.mul(&e)));
        iterated = iterated.max((p.expectation(&e) - p.expectation(&x)).norm());

        for xv in x.range() {
            for &yv in &levels {
                let recovered = joint_from_cond(&p, &x, &y, xv, yv)?;
                joint = joint.max((recovered - joint_mass(&p, &x, &y, xv, yv)).abs());
            }
        }
        if real {
            imag = imag.max(e.max_imaginary());
        }
    }
    let checks = vec![
        Check::new("best predictor", Expectation::Holds, predictor, cfg.tol_tight),
        Check::new("pull-through", Expectation::Holds, pull, cfg.tol_tight),
        Check::new("iterated expectation", Expectation::Holds, iterated, cfg.tol_tight),
        Check::new("joint recovery", Expectation::Holds, joint, cfg.tol_enumeration),
        Check::new("real stays real", Expectation::Holds, imag, cfg.tol_enumeration),
    ];
    Ok(VerificationReport::new("classical", trials, seed, None, cfg, checks))
}

/// Closed form against the least-squares oracle on random instances with
/// dimension drawn from `dims`.
pub fn verify_minimizer(
    dims: RangeInclusive<usize>,
    kind: InnerProductKind<f64>,
    trials: usize,
    seed: u64,
    cfg: &SuiteConfig,
) -> Result<VerificationReport> {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let d = rng.random_range(dims.clone());
        let pair = random_observable_pair::<f64>(d, rng.random())?;
        let rho = random_density_from(d, &mut rng);
        let x = ginibre(d, &mut rng);
        let closed = cond_exp_closed(&x, pair.b(), &rho, kind)?;
        let oracle = crate::condexp::minimize_oracle(&x, pair.b(), &rho, kind)?;
        worst = worst.max(closed.coeff_distance(&oracle));
    }
    let check = Check::new(format!("closed form vs oracle ({kind})"), Expectation::Holds, worst, cfg.tol_loose);
    Ok(VerificationReport::new("minimizer", trials, seed, None, cfg, vec![check]))
}

/// Gram-solved dual of both KD frames against the closed form
/// `S_ab / |<phi_a, phi_b>|^2`, in Frobenius norm.
pub fn verify_kd_dual(dim: usize, trials: usize, seed: u64, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let pair = random_observable_pair::<f64>(dim, rng.random())?;
        for side in [Side::Left, Side::Right] {
            let frame = kd_frame(&pair, side);
            let solved = solve_dual(frame.elements())?;
            let closed = frame.dual().expect("kd frames carry their dual");
            for (s, c) in solved.iter().zip(closed) {
                worst = worst.max(s.distance(c));
            }
        }
    }
    let check = Check::new("solved dual vs closed form", Expectation::Holds, worst, cfg.tol_exact);
    Ok(VerificationReport::new("kd-dual", trials, seed, Some(dim), cfg, vec![check]))
}

/// KD-left, KD-right, the [`FAMILY_ALPHAS`] mixes and [`FAMILY_MAGNITUDES`]
/// perturbations (alternating between the KD-left and KD-right base), each
/// with its dual.
pub fn frame_families(pair: &ObservablePair<f64>, seed: u64) -> Result<Vec<(String, OperatorFrame<f64>)>> {
    let left = kd_frame(pair, Side::Left);
    let right = kd_frame(pair, Side::Right);
    let mut out = vec![("kd-left".to_string(), left.clone()), ("kd-right".to_string(), right.clone())];
    for alpha in FAMILY_ALPHAS {
        out.push((format!("mix alpha={alpha}"), dual_frame(&mix_frames(&left, &right, alpha)?)?));
    }
    for (k, magnitude) in FAMILY_MAGNITUDES.into_iter().enumerate() {
        let (name, base) = if k % 2 == 0 { ("kd-left", &left) } else { ("kd-right", &right) };
        let perturbed = perturb_born_compatible(base, magnitude, seed.wrapping_add(k as u64))?;
        out.push((format!("{name} perturbed {magnitude:e}"), dual_frame(&perturbed)?));
    }
    Ok(out)
}

/// Overlap formula, Born marginals, iterated expectation and joint recovery
/// for one frame with dual.
pub fn verify_representation(
    name: &str,
    frame: &OperatorFrame<f64>,
    trials: usize,
    seed: u64,
    cfg: &SuiteConfig,
) -> Result<VerificationReport> {
    let mut rng = rng_from_seed(seed);
    let (a, b) = (frame.pair().a(), frame.pair().b());
    let (mut ov, mut marg, mut iterated, mut joint) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..trials {
        let t = draw_triple(b, &mut rng, cfg)?;
        let q = distribution(frame, &t.rho)?;
        let want = t.rho.expectation(&t.x.adjoint());
        ov = ov.max((overlap(&symbol(frame, &t.x)?, &q)? - want).norm());
        let m = marginals(&q);
        for (got, born) in m.over_a.iter().zip(b.diagonal_weights(t.rho.matrix())) {
            marg = marg.max((got - C::new(born, 0.0)).norm());
        }
        for (got, born) in m.over_b.iter().zip(a.diagonal_weights(t.rho.matrix())) {
            marg = marg.max((got - C::new(born, 0.0)).norm());
        }
        iterated = iterated.max(iterated_expectation_residual(frame, &t.x, &t.rho)?);
        joint = joint.max(joint_recovery_residual(frame, &t.rho)?);
    }
    let checks = vec![
        Check::new("overlap formula", Expectation::Holds, ov, cfg.tol_exact),
        Check::new("born marginals", Expectation::Holds, marg, cfg.tol_exact),
        Check::new("iterated expectation", Expectation::Holds, iterated, cfg.tol_loose),
        Check::new("joint recovery", Expectation::Holds, joint, cfg.tol_loose),
    ];
    Ok(VerificationReport::new(format!("representation {name}"), trials, seed, Some(frame.dim()), cfg, checks))
}

/// Regularizes `|+><+|` against Pauli-X for each `eps` and compares the trace
/// distance with `2 eps / (1 + eps)`.
pub fn verify_regularization(eps: &[f64], cfg: &SuiteConfig) -> Result<VerificationReport> {
    let b = crate::operator::spectral_decompose(&pauli::x(), 1e-8)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DensityMatrix::pure(&[C::new(s, 0.0), C::new(s, 0.0)]);
    let mut checks = Vec::with_capacity(2 * eps.len());
    for &e in eps {
        let r = regularize(&plus, &b, e)?;
        let gap = (trace_distance(&r, &plus) - 2.0 * e / (1.0 + e)).abs();
        checks.push(Check::new(format!("trace distance eps={e:e}"), Expectation::Holds, gap, cfg.tol_regularization));
        let min_weight = b.diagonal_weights(r.matrix()).into_iter().fold(f64::INFINITY, f64::min);
        debug_assert_eq!(min_weight > crate::condexp::D_B_TOL, in_d_b(&r, &b, crate::condexp::D_B_TOL));
        checks.push(Check::new(
            format!("min diagonal weight eps={e:e}"),
            Expectation::Violated,
            min_weight,
            crate::condexp::D_B_TOL,
        ));
    }
    Ok(VerificationReport::new("regularization", eps.len(), 0, Some(2), cfg, checks))
}

/// Searches for Hermitian `X` whose left conditional expectation is not
/// Hermitian. The note records the first witnessing trial.
pub fn verify_non_self_adjoint(dim: usize, trials: usize, seed: u64, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0_f64;
    let mut first = None;
    for trial in 0..trials {
        let pair = random_observable_pair::<f64>(dim, rng.random())?;
        let rho = random_density_from(dim, &mut rng);
        let x = random_hermitian(dim, &mut rng);
        let defect = cond_exp_closed(&x, pair.b(), &rho, InnerProductKind::Left)?.hermiticity_defect();
        if first.is_none() && defect > cfg.violation_floor {
            first = Some((trial, defect));
        }
        worst = worst.max(defect);
    }
    let check = Check::new("left expectation of Hermitian X", Expectation::Violated, worst, cfg.violation_floor);
    let report = VerificationReport::new("non-self-adjoint", trials, seed, Some(dim), cfg, vec![check]);
    Ok(match first {
        Some((trial, defect)) => report.with_note(format!("first witness at trial {trial}, defect {defect:.3e}")),
        None => report.with_note("no witness found"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zx() -> ObservablePair<f64> {
        let z = crate::operator::spectral_decompose(&pauli::z(), 1e-8).unwrap();
        let x = crate::operator::spectral_decompose(&pauli::x(), 1e-8).unwrap();
        crate::frame::check_pair(z, x, 1e-8).unwrap()
    }

    #[test]
    fn check_pass_semantics() {
        assert!(Check::new("a", Expectation::Holds, 1e-12, 1e-10).pass);
        assert!(!Check::new("a", Expectation::Holds, f64::NAN, 1e-10).pass);
        assert!(Check::new("a", Expectation::Violated, 1e-3, 1e-6).pass);
        assert!(!Check::new("a", Expectation::Violated, 1e-8, 1e-6).pass);
    }

    #[test]
    fn kd_left_pull_through_holds() {
        let cfg = SuiteConfig::default();
        let f = kd_frame(&zx(), Side::Left);
        let r = verify_pull_through(&f, Side::Left, Expectation::Holds, 50, 0, &cfg).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.max_residual < 1e-10);
    }

    #[test]
    fn kd_right_violates_left_pull_through() {
        let cfg = SuiteConfig::default();
        let f = kd_frame(&zx(), Side::Right);
        let r = verify_pull_through(&f, Side::Left, Expectation::Violated, 20, 1, &cfg).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn mixed_frame_violates_left_pull_through() {
        let cfg = SuiteConfig::default();
        let pair = random_observable_pair::<f64>(3, 4).unwrap();
        let f = dual_frame(&mix_frames(&kd_frame(&pair, Side::Left), &kd_frame(&pair, Side::Right), 0.5).unwrap())
            .unwrap();
        let r = verify_pull_through(&f, Side::Left, Expectation::Violated, 50, 2, &cfg).unwrap();
        assert!(r.min_violation.unwrap() > 1e-3, "{r:?}");
    }

    #[test]
    fn scan_on_qubit_off_half() {
        let cfg = SuiteConfig::default();
        let r = verify_kd_uniqueness_scan(&zx(), &[0.0, 0.25, 0.75, 1.0], 20, 3, &cfg).unwrap();
        assert!(r.pass, "{:?}", r.failed_checks().collect::<Vec<_>>());
        assert!(r.min_violation.unwrap() > 1e-4);
        assert!(r.max_residual < 1e-10);
    }

    #[test]
    fn scan_propagates_singular_gram() {
        let cfg = SuiteConfig::default();
        let err = verify_kd_uniqueness_scan(&zx(), &[0.5], 5, 0, &cfg).unwrap_err();
        assert!(matches!(err, crate::Error::SingularGram(_)));
    }

    #[test]
    fn scan_on_qutrit_with_half() {
        let cfg = SuiteConfig::default();
        let pair = random_observable_pair::<f64>(3, 8).unwrap();
        let r = verify_kd_uniqueness_scan(&pair, &[0.0, 0.25, 0.5, 0.75, 1.0], 20, 3, &cfg).unwrap();
        assert!(r.pass, "{:?}", r.failed_checks().collect::<Vec<_>>());
    }

    #[test]
    fn scan_single_endpoint() {
        let cfg = SuiteConfig::default();
        let r = verify_kd_uniqueness_scan(&zx(), &[1.0], 10, 0, &cfg).unwrap();
        assert!(r.checks[0].pass && r.checks[0].expectation == Expectation::Holds);
    }

    #[test]
    fn characterization_by_kind() {
        let cfg = SuiteConfig::default();
        let b = random_observable_pair::<f64>(2, 5).unwrap().b().clone();
        for kind in [InnerProductKind::Left, InnerProductKind::Right, InnerProductKind::Alpha(0.5)] {
            let r = verify_characterization(&b, kind, 50, 9, &cfg).unwrap();
            assert!(r.pass, "{kind}: {:?}", r.failed_checks().collect::<Vec<_>>());
        }
    }

    #[test]
    fn classical_suite_passes() {
        let r = verify_classical(100, 31, &SuiteConfig::default()).unwrap();
        assert!(r.pass, "{:?}", r.failed_checks().collect::<Vec<_>>());
    }

    #[test]
    fn deterministic_y_gives_constant() {
        let p = FiniteProbSpace::new(vec![0, 1, 2], vec![0.2, 0.3, 0.5]).unwrap();
        let x = RandomVariable::new(vec![C::new(1.0, 1.0), C::new(2.0, 0.0), C::new(-1.0, 0.5)]);
        let y = RandomVariable::new(vec![4.0, 4.0, 4.0]);
        let e = cond_exp(&p, &x, &y).unwrap();
        let mean = p.expectation(&x);
        assert!(e.values.iter().all(|v| (v - mean).norm() < 1e-15));
    }

    #[test]
    fn minimizer_all_kinds() {
        let cfg = SuiteConfig::default();
        for kind in [InnerProductKind::Left, InnerProductKind::Right, InnerProductKind::Alpha(0.5)] {
            assert!(verify_minimizer(2..=6, kind, 20, 11, &cfg).unwrap().pass);
        }
    }

    #[test]
    fn representation_families_qutrit() {
        let cfg = SuiteConfig::default();
        let pair = random_observable_pair::<f64>(3, 13).unwrap();
        for (name, f) in frame_families(&pair, 13).unwrap() {
            let r = verify_representation(&name, &f, 5, 13, &cfg).unwrap();
            assert!(r.pass, "{name}: {:?}", r.failed_checks().collect::<Vec<_>>());
        }
    }

    #[test]
    fn regularization_and_witness() {
        let cfg = SuiteConfig::default();
        assert!(verify_regularization(&[1e-6, 1e-3, 1e-1], &cfg).unwrap().pass);
        let w = verify_non_self_adjoint(2, 200, 0, &cfg).unwrap();
        assert!(w.pass, "{w:?}");
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = SuiteConfig::default();
        let f = kd_frame(&zx(), Side::Left);
        let a = verify_pull_through(&f, Side::Right, Expectation::Violated, 10, 5, &cfg).unwrap();
        let b = verify_pull_through(&f, Side::Right, Expectation::Violated, 10, 5, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.max_residual.to_bits(), b.max_residual.to_bits());
    }
}
