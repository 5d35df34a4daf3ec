use std::path::Path;

use kdq_core::condexp::{cond_exp_closed, minimize_oracle, regularize, InnerProductKind};
use kdq_core::frame::{
    check_pair, condition_number, dual_frame, frame_bounds, gram_matrix, kd_frame, mix_frames, random_observable_pair,
    ObservablePair, OperatorFrame, Side,
};
use kdq_core::operator::{make_density_with, random_density, spectral_decompose_with};
use kdq_core::quasiprob::{kd_distribution, marginals};
use kdq_core::suite::{verify_characterization, verify_classical, verify_kd_uniqueness_scan, SuiteConfig, VerificationReport};
use kdq_core::{Complex64, DensityMatrix, Matrix64, Observable, Tolerances};
use serde::Serialize;

use crate::args::{Format, Global, KindArg, RandomWhat, SideArg, SuiteArg};
use crate::error::{classify, CliError, Source};
use crate::io::{read_matrix, tidy, MatrixFile};

/// `index:value` with 12 significant digits, so that joins never compare floats.
pub fn label(index: usize, value: f64) -> String {
    format!("{index}:{value:.11e}")
}

fn labels(o: &Observable<f64>) -> Vec<String> {
    o.eigenvalues().iter().enumerate().map(|(k, &v)| label(k, v)).collect()
}

#[derive(Debug, Serialize)]
struct Entry {
    a_label: String,
    b_label: String,
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize)]
struct Labeled {
    label: String,
    re: f64,
    im: f64,
}

fn labeled(label: &str, z: Complex64) -> Labeled {
    Labeled {
        label: label.to_string(),
        re: tidy(z.re),
        im: tidy(z.im),
    }
}

fn json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn tolerances(g: &Global) -> Result<Tolerances<f64>, CliError> {
    if g.tol <= 0.0 || !g.tol.is_finite() {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", g.tol)));
    }
    Ok(Tolerances::uniform(g.tol))
}

fn observable(path: &Path, tol: &Tolerances<f64>) -> Result<Observable<f64>, CliError> {
    spectral_decompose_with(&read_matrix(path)?, tol).map_err(|e| classify(e, Source::Observable))
}

fn density(path: &Path, tol: &Tolerances<f64>) -> Result<DensityMatrix<f64>, CliError> {
    make_density_with(read_matrix(path)?, tol).map_err(|e| classify(e, Source::Density))
}

fn same_dim(dims: &[usize]) -> Result<(), CliError> {
    if dims.windows(2).any(|w| w[0] != w[1]) {
        return Err(CliError::Usage(format!("input dimensions differ: {dims:?}")));
    }
    Ok(())
}

fn pair(a: &Path, b: &Path, tol: &Tolerances<f64>) -> Result<ObservablePair<f64>, CliError> {
    let a = observable(a, tol)?;
    let b = observable(b, tol)?;
    same_dim(&[a.dim(), b.dim()])?;
    check_pair(a, b, tol.num).map_err(|e| classify(e, Source::Other))
}

fn conditioned(rho: DensityMatrix<f64>, b: &Observable<f64>, g: &Global) -> Result<DensityMatrix<f64>, CliError> {
    match g.regularize {
        Some(eps) => regularize(&rho, b, eps).map_err(|e| classify(e, Source::Other)),
        None => Ok(rho),
    }
}

#[derive(Debug, Serialize)]
struct KdOutput {
    side: Side,
    a_labels: Vec<String>,
    b_labels: Vec<String>,
    entries: Vec<Entry>,
    /// Sum over `a`: the distribution of `B`.
    b_marginal: Vec<Labeled>,
    /// Sum over `b`: the distribution of `A`.
    a_marginal: Vec<Labeled>,
}

pub fn kd(g: &Global, a: &Path, b: &Path, rho: &Path, side: SideArg) -> Result<String, CliError> {
    let tol = tolerances(g)?;
    let pair = pair(a, b, &tol)?;
    let rho = density(rho, &tol)?;
    same_dim(&[pair.dim(), rho.dim()])?;
    let rho = conditioned(rho, pair.b(), g)?;
    let q = kd_distribution(&pair, &rho, side.into());
    let m = marginals(&q);
    let (al, bl) = (labels(pair.a()), labels(pair.b()));
    let d = pair.dim();
    let mut entries = Vec::with_capacity(d * d);
    for (ia, la) in al.iter().enumerate() {
        for (ib, lb) in bl.iter().enumerate() {
            let z = q.get(ia, ib);
            entries.push(Entry {
                a_label: la.clone(),
                b_label: lb.clone(),
                re: tidy(z.re),
                im: tidy(z.im),
            });
        }
    }
    let out = KdOutput {
        side: side.into(),
        b_marginal: bl.iter().zip(&m.over_a).map(|(l, &z)| labeled(l, z)).collect(),
        a_marginal: al.iter().zip(&m.over_b).map(|(l, &z)| labeled(l, z)).collect(),
        a_labels: al,
        b_labels: bl,
        entries,
    };
    Ok(match g.format {
        Format::Json => json(&out),
        Format::Csv => {
            let star = || "*".to_string();
            let rows = out
                .entries
                .iter()
                .map(|e| vec![e.a_label.clone(), e.b_label.clone(), e.re.to_string(), e.im.to_string()])
                .chain(out.b_marginal.iter().map(|m| vec![star(), m.label.clone(), m.re.to_string(), m.im.to_string()]))
                .chain(out.a_marginal.iter().map(|m| vec![m.label.clone(), star(), m.re.to_string(), m.im.to_string()]));
            csv_text(&["a_label", "b_label", "re", "im"], rows)
        }
    })
}

#[derive(Debug, Serialize)]
struct CondexpOutput {
    kind: String,
    coefficients: Vec<Labeled>,
    matrix: MatrixFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_distance: Option<f64>,
}

pub fn condexp(
    g: &Global,
    x: &Path,
    b: &Path,
    rho: &Path,
    kind: KindArg,
    alpha: Option<f64>,
    check: bool,
) -> Result<String, CliError> {
    let tol = tolerances(g)?;
    let x = read_matrix(x)?;
    let b = observable(b, &tol)?;
    let rho = density(rho, &tol)?;
    same_dim(&[x.dim(), b.dim(), rho.dim()])?;
    let kind = match (kind, alpha) {
        (KindArg::Left, None) => InnerProductKind::Left,
        (KindArg::Right, None) => InnerProductKind::Right,
        (KindArg::Alpha, Some(a)) => InnerProductKind::alpha(a).map_err(|e| CliError::Usage(e.to_string()))?,
        (KindArg::Alpha, None) => return Err(CliError::Usage("--kind alpha needs --alpha".into())),
        (_, Some(_)) => return Err(CliError::Usage("--alpha is only valid with --kind alpha".into())),
    };
    let rho = conditioned(rho, &b, g)?;
    let e = cond_exp_closed(&x, &b, &rho, kind).map_err(|e| classify(e, Source::Other))?;
    let oracle_distance = if check {
        let o = minimize_oracle(&x, &b, &rho, kind).map_err(|e| classify(e, Source::Other))?;
        Some(e.coeff_distance(&o))
    } else {
        None
    };
    let out = CondexpOutput {
        kind: kind.to_string(),
        coefficients: labels(&b).iter().zip(e.coeffs()).map(|(l, &z)| labeled(l, z)).collect(),
        matrix: MatrixFile::from_matrix(e.matrix()),
        oracle_distance,
    };
    Ok(match g.format {
        Format::Json => json(&out),
        Format::Csv => {
            let rows = out
                .coefficients
                .iter()
                .map(|c| vec![c.label.clone(), c.re.to_string(), c.im.to_string()])
                .chain(out.oracle_distance.map(|d| vec!["oracle_distance".into(), d.to_string(), "0".into()]));
            csv_text(&["b_label", "re", "im"], rows)
        }
    })
}

#[derive(Debug, Serialize)]
struct DualElement {
    a_label: String,
    b_label: String,
    matrix: MatrixFile,
}

#[derive(Debug, Serialize)]
struct DualOutput {
    frame: String,
    condition_number: f64,
    frame_bounds: [f64; 2],
    biorthogonality_residual: f64,
    dual: Vec<DualElement>,
}

pub fn dual(g: &Global, a: &Path, b: &Path, side: SideArg, alpha: Option<f64>) -> Result<String, CliError> {
    let tol = tolerances(g)?;
    let pair = pair(a, b, &tol)?;
    let (name, frame): (String, OperatorFrame<f64>) = match alpha {
        Some(alpha) => {
            let mixed = mix_frames(&kd_frame(&pair, Side::Left), &kd_frame(&pair, Side::Right), alpha)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            (format!("mix alpha={alpha}"), mixed)
        }
        None => {
            let side: Side = side.into();
            (format!("kd-{side}"), kd_frame(&pair, side))
        }
    };
    let cond = condition_number(&gram_matrix(frame.elements()));
    let (c1, c2) = frame_bounds(&frame);
    let solved = dual_frame(&frame).map_err(|e| classify(e, Source::Other))?;
    let (al, bl) = (labels(pair.a()), labels(pair.b()));
    let d = pair.dim();
    let dual: Vec<DualElement> = solved
        .dual()
        .expect("solved frame carries its dual")
        .iter()
        .enumerate()
        .map(|(k, t)| DualElement {
            a_label: al[k / d].clone(),
            b_label: bl[k % d].clone(),
            matrix: MatrixFile::from_matrix(t),
        })
        .collect();
    let out = DualOutput {
        frame: name,
        condition_number: cond,
        frame_bounds: [c1, c2],
        biorthogonality_residual: solved.biorthogonality_residual().expect("dual present"),
        dual,
    };
    Ok(match g.format {
        Format::Json => json(&out),
        Format::Csv => {
            let rows = out.dual.iter().flat_map(|e| {
                let d = e.matrix.dim;
                e.matrix.data.iter().enumerate().map(move |(k, [re, im])| {
                    vec![
                        e.a_label.clone(),
                        e.b_label.clone(),
                        (k / d).to_string(),
                        (k % d).to_string(),
                        re.to_string(),
                        im.to_string(),
                    ]
                })
            });
            csv_text(&["a_label", "b_label", "row", "col", "re", "im"], rows)
        }
    })
}

/// `{0, 0.1, ..., 1}`; on a qubit `0.5` is dropped because the even mix has no dual there.
pub fn default_alphas(dim: usize) -> Vec<f64> {
    (0..=10)
        .filter(|&k| !(dim == 2 && k == 5))
        .map(|k| k as f64 / 10.0)
        .collect()
}

#[derive(Debug, Serialize)]
struct VerifyOutput {
    suite: String,
    dim: usize,
    trials: usize,
    seed: u64,
    pass: bool,
    reports: Vec<VerificationReport>,
}

pub const MIN_VERIFY_DIM: usize = 2;
pub const MAX_VERIFY_DIM: usize = 8;

/// Returns the rendered reports and whether all of them passed.
pub fn verify(
    g: &Global,
    suite: SuiteArg,
    dim: usize,
    trials: usize,
    alphas: Option<&[f64]>,
) -> Result<(String, bool), CliError> {
    if !(MIN_VERIFY_DIM..=MAX_VERIFY_DIM).contains(&dim) {
        return Err(CliError::Usage(format!(
            "--dim must lie in [{MIN_VERIFY_DIM}, {MAX_VERIFY_DIM}], got {dim}"
        )));
    }
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    tolerances(g)?;
    let mut cfg = SuiteConfig {
        tol_exact: g.tol,
        ..SuiteConfig::default()
    };
    if let Some(eps) = g.regularize {
        if eps <= 0.0 || !eps.is_finite() {
            return Err(CliError::Usage(format!("--regularize must be positive, got {eps}")));
        }
        cfg.regularize_eps = eps;
    }
    let alphas = alphas.map(<[f64]>::to_vec).unwrap_or_else(|| default_alphas(dim));
    if let Some(bad) = alphas.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(CliError::Usage(format!("alpha {bad} outside [0, 1]")));
    }
    let core = |e| classify(e, Source::Other);
    let seed = g.seed;
    let pair = random_observable_pair::<f64>(dim, seed).map_err(core)?;
    let mut reports = Vec::new();
    if matches!(suite, SuiteArg::Classical | SuiteArg::All) {
        reports.push(verify_classical(trials, seed, &cfg).map_err(core)?);
    }
    if matches!(suite, SuiteArg::Characterization | SuiteArg::All) {
        for kind in [InnerProductKind::Left, InnerProductKind::Right, InnerProductKind::Alpha(0.5)] {
            reports.push(verify_characterization(pair.b(), kind, trials, seed, &cfg).map_err(core)?);
        }
    }
    if matches!(suite, SuiteArg::KdUniqueness | SuiteArg::All) {
        reports.push(verify_kd_uniqueness_scan(&pair, &alphas, trials, seed, &cfg).map_err(core)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    let out = VerifyOutput {
        suite: format!("{suite:?}").to_lowercase(),
        dim,
        trials,
        seed,
        pass,
        reports,
    };
    let text = match g.format {
        Format::Json => json(&out),
        Format::Csv => {
            let rows = out.reports.iter().flat_map(|r| {
                r.checks.iter().map(move |c| {
                    vec![
                        r.theorem.clone(),
                        c.label.clone(),
                        format!("{:?}", c.expectation).to_lowercase(),
                        c.residual.to_string(),
                        c.threshold.to_string(),
                        c.pass.to_string(),
                    ]
                })
            });
            csv_text(&["theorem", "check", "expectation", "residual", "threshold", "pass"], rows)
        }
    };
    Ok((text, pass))
}

pub fn random(g: &Global, what: RandomWhat, dim: usize) -> Result<String, CliError> {
    let core = |e| classify(e, Source::Other);
    let m: Matrix64 = match what {
        RandomWhat::A => random_observable_pair::<f64>(dim, g.seed).map_err(core)?.a().matrix().clone(),
        RandomWhat::B => random_observable_pair::<f64>(dim, g.seed).map_err(core)?.b().matrix().clone(),
        RandomWhat::Density => random_density::<f64>(dim, g.seed).map_err(core)?.matrix().clone(),
    };
    let file = MatrixFile::from_matrix(&m);
    Ok(match g.format {
        Format::Json => {
            let mut s = serde_json::to_string(&file).expect("serializable matrix");
            s.push('\n');
            s
        }
        Format::Csv => {
            let rows = file.data.iter().enumerate().map(|(k, [re, im])| {
                vec![(k / dim).to_string(), (k % dim).to_string(), re.to_string(), im.to_string()]
            });
            csv_text(&["row", "col", "re", "im"], rows)
        }
    })
}
