//! The six verification suites and their worker-pool dispatcher.

use std::collections::VecDeque;
use std::sync::Mutex;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use rigidity_core::clifford::{anticommutation_residual, build_clifford_rep, diagonalize_omega, omega_matrix_raw};
use rigidity_core::curvature::{scalar_curvature_fd, StencilOrder};
use rigidity_core::dirac::{
    assemble_operators, boundary_anticommutation_check, boundary_endomorphism_bound,
    chi_lambda_pairing_check, curvature_endomorphism_bound, sl_identity_residual, FiberKind,
    ParityMode, PsiData,
};
use rigidity_core::grid::{Face, GridDomain};
use rigidity_core::linalg::{eye, max_abs, max_abs_diff, CMat, C64};
use rigidity_core::polytope::{
    boundary_defect_hyperbolic, boundary_sample, convexity_min_eigen, smoothing_convergence,
    sphere_oracle, trace_norm_comparison, trace_norm_dn, BoundaryMetric, ConvexPolytope,
};
use rigidity_core::spinor::{
    boundary_condition_residual, build_killing_basis, build_killing_basis_with, classify_type, curvature_reconstruction_residual, gram_identity_check, killing_residual,
    standard_diagonal_rep, type_one_initial, v_profile, MetricKind, SpinorType,
};
use rigidity_core::warped::{
    log_concavity_report, rotational_domain_angle_grid, scalar_curvature_warped, ProfileKind,
    WarpProfile, WarpedMetricSpec,
};

use crate::config::SuiteConfig;
use crate::report::{digest, Check, Series};
use crate::CliError;

pub const SUITES: [&str; 6] = [
    "clifford-check",
    "warped",
    "killing",
    "smooth-polytope",
    "sl-residual",
    "tracenorm",
];

type Job = Box<dyn FnOnce() -> Check + Send>;

/// Run jobs on a fixed-size worker pool; results are merged in check-id
/// order regardless of completion order.
fn run_parallel(jobs: Vec<Job>, workers: usize) -> Vec<Check> {
    let queue: Mutex<VecDeque<(usize, Job)>> = Mutex::new(jobs.into_iter().enumerate().collect());
    let done: Mutex<Vec<(usize, Check)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers.max(1) {
            scope.spawn(|| loop {
                let next = queue.lock().expect("queue lock").pop_front();
                let Some((k, job)) = next else { break };
                let start = Instant::now();
                let mut check = job();
                check.runtime = start.elapsed();
                done.lock().expect("result lock").push((k, check));
            });
        }
    });
    let mut out = done.into_inner().expect("pool finished");
    out.sort_by_key(|(k, _)| *k);
    let mut checks: Vec<Check> = out.into_iter().map(|(_, c)| c).collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    checks
}

pub fn run_suite(suite: &str, cfg: &SuiteConfig, workers: usize) -> Result<Vec<Check>, CliError> {
    let jobs = match suite {
        "clifford-check" => clifford_jobs(cfg)?,
        "warped" => warped_jobs(cfg)?,
        "killing" => killing_jobs(cfg)?,
        "smooth-polytope" => polytope_jobs(cfg)?,
        "sl-residual" => sl_jobs(cfg)?,
        "tracenorm" => tracenorm_jobs(cfg)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite `{other}`; expected one of {}",
                SUITES.join(" | ")
            )))
        }
    };
    let mut checks = run_parallel(jobs, workers);
    for check in &mut checks {
        if let Some(&tol) = cfg.tolerances.get(&check.id) {
            check.tolerance = tol;
            check.pass = check.measured.is_finite() && check.measured <= tol;
        }
    }
    Ok(checks)
}

/// Observed convergence order from (h, residual) rows, averaged over
/// adjacent refinements.
fn observed_order(rows: &[(f64, f64)]) -> f64 {
    let mut acc = 0.0;
    let mut count = 0usize;
    for w in rows.windows(2) {
        let (h0, r0) = w[0];
        let (h1, r1) = w[1];
        if r0 > 0.0 && r1 > 0.0 && h0 != h1 {
            acc += (r0 / r1).ln() / (h0 / h1).ln();
            count += 1;
        }
    }
    if count == 0 {
        f64::NAN
    } else {
        acc / count as f64
    }
}

/// Largest increase across consecutive entries (0 for a non-increasing
/// sequence).
fn max_window_increase(vals: &[f64]) -> f64 {
    vals.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max)
}

fn catching(suite: &'static str, id: String, anchor: &'static str, inputs: String, body: impl FnOnce() -> Result<Check, CliError> + Send + 'static) -> Job {
    Box::new(move || match body() {
        Ok(c) => c,
        Err(e) => Check::failed(suite, &id, anchor, inputs, e.to_string()),
    })
}

// ---------------------------------------------------------------------------
// clifford-check
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct CliffordParams {
    n_list: Vec<usize>,
}

impl Default for CliffordParams {
    fn default() -> Self {
        CliffordParams { n_list: vec![2, 3, 4, 5, 6] }
    }
}

fn clifford_jobs(cfg: &SuiteConfig) -> Result<Vec<Job>, CliError> {
    let params: CliffordParams = cfg.typed_params()?;
    let mut jobs: Vec<Job> = Vec::new();
    for &n in &params.n_list {
        let inputs = digest(&["clifford", &n.to_string()]);
        let inp = inputs.clone();
        jobs.push(catching(
            "clifford-check",
            format!("clifford-n{n}-gamma-anticommutation"),
            "generator relations g_i g_j + g_j g_i = -2 delta_ij",
            inputs.clone(),
            move || {
                let rep = build_clifford_rep(n)?;
                Ok(Check::new(
                    "clifford-check",
                    &format!("clifford-n{n}-gamma-anticommutation"),
                    "generator relations g_i g_j + g_j g_i = -2 delta_ij",
                    inp,
                    anticommutation_residual(&rep),
                    1e-12,
                ))
            },
        ));
        let inp = inputs.clone();
        jobs.push(catching(
            "clifford-check",
            format!("clifford-n{n}-parity-element"),
            "grading (even n) / complex volume element (odd n) identities",
            inputs.clone(),
            move || {
                let rep = build_clifford_rep(n)?;
                let m = rep.m;
                let mut worst = 0.0f64;
                if let Some(eps) = &rep.grading {
                    worst = worst.max(max_abs_diff(eps, &eps.adjoint()));
                    worst = worst.max(max_abs_diff(&(eps * eps), &eye(m)));
                    for g in &rep.gammas {
                        worst = worst.max(max_abs(&(eps * g + g * eps)));
                    }
                }
                if let Some(vol) = &rep.volume {
                    worst = worst.max(max_abs_diff(vol, &vol.adjoint()));
                    worst = worst.max(max_abs_diff(&(vol * vol), &eye(m)));
                    for g in &rep.gammas {
                        worst = worst.max(max_abs(&(vol * g - g * vol)));
                    }
                }
                Ok(Check::new(
                    "clifford-check",
                    &format!("clifford-n{n}-parity-element"),
                    "grading (even n) / complex volume element (odd n) identities",
                    inp,
                    worst,
                    1e-12,
                ))
            },
        ));
        let inp = inputs.clone();
        jobs.push(catching(
            "clifford-check",
            format!("clifford-n{n}-omega-involution"),
            "omega_X is a Hermitian involution for unit X",
            inputs.clone(),
            move || {
                let rep = build_clifford_rep(n)?;
                let mut worst = 0.0f64;
                for x in unit_directions(n) {
                    let om = omega_matrix_raw(&rep, &x)?;
                    worst = worst.max(max_abs_diff(&om, &om.adjoint()));
                    worst = worst.max(max_abs_diff(&(&om * &om), &eye(rep.m)));
                }
                Ok(Check::new(
                    "clifford-check",
                    &format!("clifford-n{n}-omega-involution"),
                    "omega_X is a Hermitian involution for unit X",
                    inp,
                    worst,
                    1e-12,
                ))
            },
        ));
        let inp = inputs;
        jobs.push(catching(
            "clifford-check",
            format!("clifford-n{n}-omega-anticommutation"),
            "omega_X omega_Y + omega_Y omega_X = 2<X,Y>",
            inp.clone(),
            move || {
                let rep = build_clifford_rep(n)?;
                // deterministic pseudo-random vector pairs
                let mut rng = ChaCha8Rng::seed_from_u64(0xC11F + n as u64);
                let mut worst = 0.0f64;
                for _ in 0..200 {
                    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let ox = omega_matrix_raw(&rep, &x)?;
                    let oy = omega_matrix_raw(&rep, &y)?;
                    let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
                    let lhs = &ox * &oy + &oy * &ox;
                    let rhs = eye(rep.m).map(|z| C64::new(2.0 * xy, 0.0) * z);
                    worst = worst.max(max_abs_diff(&lhs, &rhs));
                }
                Ok(Check::new(
                    "clifford-check",
                    &format!("clifford-n{n}-omega-anticommutation"),
                    "omega_X omega_Y + omega_Y omega_X = 2<X,Y>",
                    inp,
                    worst,
                    1e-12,
                ))
            },
        ));
    }
    Ok(jobs)
}

fn unit_directions(n: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for axis in 0..n {
        let mut d = vec![0.0; n];
        d[axis] = 1.0;
        dirs.push(d);
    }
    let s = (n as f64).sqrt().recip();
    dirs.push(vec![s; n]);
    if n >= 2 {
        let mut d = vec![0.0; n];
        d[0] = std::f64::consts::FRAC_1_SQRT_2;
        d[1] = -std::f64::consts::FRAC_1_SQRT_2;
        dirs.push(d);
    }
    dirs
}

// ---------------------------------------------------------------------------
// warped
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct WarpedParams {
    n_list: Vec<usize>,
    oracle_h_list: Vec<f64>,
    oracle_point: f64,
}

impl Default for WarpedParams {
    fn default() -> Self {
        WarpedParams {
            n_list: vec![3, 4],
            oracle_h_list: vec![0.08, 0.04, 0.02],
            oracle_point: 0.7,
        }
    }
}

fn warped_jobs(cfg: &SuiteConfig) -> Result<Vec<Job>, CliError> {
    let params: WarpedParams = cfg.typed_params()?;
    let mut jobs: Vec<Job> = Vec::new();
    for &n in &params.n_list {
        let inp = digest(&["warped-hyperbolic", &n.to_string()]);
        jobs.push(catching(
            "warped",
            format!("warped-hyperbolic-scalar-n{n}"),
            "half-space metric (x1)^-2 delta has scalar curvature -n(n-1)",
            inp.clone(),
            move || {
                let metric = move |x: &[f64]| DMatrix::<f64>::identity(n, n) / (x[0] * x[0]);
                let mut worst = 0.0f64;
                for x1 in [0.6, 1.0, 1.7] {
                    let mut x = vec![0.3; n];
                    x[0] = x1;
                    let r = scalar_curvature_fd(&metric, &x, 1e-3, StencilOrder::Fourth);
                    worst = worst.max((r + (n * (n - 1)) as f64).abs());
                }
                Ok(Check::new(
                    "warped",
                    &format!("warped-hyperbolic-scalar-n{n}"),
                    "half-space metric (x1)^-2 delta has scalar curvature -n(n-1)",
                    inp,
                    worst,
                    1e-6,
                ))
            },
        ));
    }
    {
        let h_list = params.oracle_h_list.clone();
        let r0 = params.oracle_point;
        let inp = digest(&["warped-oracle", &format!("{h_list:?}"), &r0.to_string()]);
        jobs.push(catching(
            "warped",
            "warped-closed-form-order".into(),
            "closed-form warped scalar curvature vs finite-difference oracle",
            inp.clone(),
            move || {
                let profile = WarpProfile::new(ProfileKind::Cosh, 0.2, 1.2)?;
                let spec = WarpedMetricSpec::new(4, profile, 0.0)?; // flat torus fiber
                let closed = scalar_curvature_warped(&spec, r0)?;
                let metric = |x: &[f64]| {
                    let phi2 = x[0].cosh().powi(2);
                    let mut g = DMatrix::<f64>::identity(4, 4);
                    for i in 1..4 {
                        g[(i, i)] = phi2;
                    }
                    g
                };
                let x = vec![r0, 0.1, -0.3, 0.2];
                let rows: Vec<(f64, f64)> = h_list
                    .iter()
                    .map(|&h| {
                        let fd = scalar_curvature_fd(&metric, &x, h, StencilOrder::Second);
                        (h, (fd - closed).abs())
                    })
                    .collect();
                let order = observed_order(&rows);
                Ok(Check::new(
                    "warped",
                    "warped-closed-form-order",
                    "closed-form warped scalar curvature vs finite-difference oracle",
                    inp,
                    (order - 2.0).abs(),
                    0.2,
                )
                .with_value("order", order)
                .with_value("closed_form", closed)
                .with_series(Series {
                    x_label: "h".into(),
                    y_label: "oracle deviation".into(),
                    log_log: true,
                    points: rows,
                }))
            },
        ));
    }
    {
        let inp = digest(&["warped-log-concavity"]);
        jobs.push(catching(
            "warped",
            "warped-log-concavity".into(),
            "strict log-concavity of the sech warp profile",
            inp.clone(),
            move || {
                let profile = WarpProfile::new(ProfileKind::Sech, -0.8, 0.8)?;
                let rpt = log_concavity_report(&profile, 256)?;
                let measured = if rpt.strict { 0.0 } else { 1.0 };
                Ok(Check::new(
                    "warped",
                    "warped-log-concavity",
                    "strict log-concavity of the sech warp profile",
                    inp,
                    measured,
                    0.5,
                )
                .with_value("min_neg_log_second_derivative", rpt.min_value))
            },
        ));
    }
    {
        let inp = digest(&["warped-angle-monotone"]);
        jobs.push(catching(
            "warped",
            "warped-angle-monotone".into(),
            "dihedral angle of a rotational boundary decreases in r",
            inp.clone(),
            move || {
                let profile = WarpProfile::new(ProfileKind::Cosh, 0.2, 1.2)?;
                let prof = rotational_domain_angle_grid(&profile, |r| -0.5 * r * r, 64);
                let gammas: Vec<f64> = prof.samples.iter().map(|(_, s)| s.gamma).collect();
                let series = Series {
                    x_label: "r".into(),
                    y_label: "gamma(r)".into(),
                    log_log: false,
                    points: prof.samples.iter().map(|&(r, s)| (r, s.gamma)).collect(),
                };
                Ok(Check::new(
                    "warped",
                    "warped-angle-monotone",
                    "dihedral angle of a rotational boundary decreases in r",
                    inp,
                    max_window_increase(&gammas),
                    1e-9,
                )
                .with_value("monotone", if prof.monotone_decreasing { 1.0 } else { 0.0 })
                .with_series(series))
            },
        ));
    }
    Ok(jobs)
}

// ---------------------------------------------------------------------------
// killing
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct KillingParams {
    h_list: Vec<f64>,
    min: Vec<f64>,
    max: Vec<f64>,
}

impl Default for KillingParams {
    fn default() -> Self {
        KillingParams {
            h_list: vec![0.25 / 4.0, 0.25 / 8.0, 0.25 / 16.0],
            min: vec![1.0, 0.0, 0.0],
            max: vec![1.25, 0.25, 0.25],
        }
    }
}

/// Unitary initial data inside the boundary-condition eigenspace of chi for
/// a face normal: written in the omega-diagonal basis the eigenspace is the
/// off-diagonal (even n) resp. diagonal (odd n) block pair, so a swap/identity
/// block matrix conjugated back is both unitary and admissible.
pub fn unitary_boundary_adapted(
    rep: &rigidity_core::clifford::CliffordRep,
    n_face: &[f64],
) -> rigidity_core::Result<CMat> {
    let u = diagonalize_omega(rep, n_face)?;
    let m = rep.m;
    let mut a = CMat::zeros(m, m);
    if rep.grading.is_some() {
        for k in 0..m / 2 {
            a[(k, m / 2 + k)] = C64::new(1.0, 0.0);
            a[(m / 2 + k, k)] = C64::new(1.0, 0.0);
        }
    } else {
        a = eye(m);
    }
    Ok(&u * a * u.transpose())
}

fn killing_jobs(cfg: &SuiteConfig) -> Result<Vec<Job>, CliError> {
    let seed = cfg.require_seed("killing")?;
    let params: KillingParams = cfg.typed_params()?;
    if params.min.len() != 3 || params.max.len() != 3 {
        return Err(CliError::Config("killing suite expects a 3-dimensional box".into()));
    }
    let mut jobs: Vec<Job> = Vec::new();
    let base_inputs = digest(&[
        "killing",
        &format!("{:?}", params.h_list),
        &format!("{:?}", params.min),
        &format!("{:?}", params.max),
        &seed.to_string(),
    ]);
    {
        let p = params.h_list.clone();
        let (mn, mx) = (params.min.clone(), params.max.clone());
        let inp = base_inputs.clone();
        jobs.push(catching(
            "killing",
            "killing-residual-order".into(),
            "transported basis satisfies the Killing equation to second order",
            inp.clone(),
            move || {
                let (rep, signs) = standard_diagonal_rep(3)?;
                let mut rows = Vec::new();
                for &h in &p {
                    let dom = GridDomain::new(mn.clone(), mx.clone(), h)?;
                    let field = build_killing_basis(&rep, &signs, &dom, &[0, 0, 0])?;
                    rows.push((h, killing_residual(&field)));
                }
                let order = observed_order(&rows);
                Ok(Check::new(
                    "killing",
                    "killing-residual-order",
                    "transported basis satisfies the Killing equation to second order",
                    inp,
                    (order - 2.0).abs(),
                    0.3,
                )
                .with_value("order", order)
                .with_series(Series {
                    x_label: "h".into(),
                    y_label: "Killing residual".into(),
                    log_log: true,
                    points: rows,
                }))
            },
        ));
    }
    {
        let h = *params.h_list.last().expect("nonempty h list");
        let (mn, mx) = (params.min.clone(), params.max.clone());
        let inp = base_inputs.clone();
        jobs.push(catching(
            "killing",
            "killing-classifier-constancy".into(),
            "V^2 - |grad V|^2 is spatially constant on transported spinors",
            inp.clone(),
            move || {
                let (rep, signs) = standard_diagonal_rep(3)?;
                let dom = GridDomain::new(mn, mx, h)?;
                let field = build_killing_basis(&rep, &signs, &dom, &[0, 0, 0])?;
                let res = killing_residual(&field);
                let prof = v_profile(&field, 0)?;
                Ok(Check::new(
                    "killing",
                    "killing-classifier-constancy",
                    "V^2 - |grad V|^2 is spatially constant on transported spinors",
                    inp,
                    prof.c_algebraic_stddev,
                    10.0 * res,
                )
                .with_value("killing_residual", res)
                .with_value("classifier_mean", prof.c_algebraic_mean))
            },
        ));
    }
    {
        let h = *params.h_list.last().expect("nonempty h list");
        let (mn, mx) = (params.min.clone(), params.max.clone());
        let inp = base_inputs.clone();
        jobs.push(catching(
            "killing",
            "killing-gram-offdiagonal".into(),
            "boundary-adapted unitary initial data keeps the Gram matrix diagonal",
            inp.clone(),
            move || {
                let (rep, signs) = standard_diagonal_rep(3)?;
                let dom = GridDomain::new(mn, mx, h)?;
                let face = Face { axis: 1, upper: false };
                let n_out = dom.outward_normal(face);
                let init = unitary_boundary_adapted(&rep, &n_out)?;
                let field = build_killing_basis_with(&rep, &signs, &dom, &[0, 0, 0], &init)?;
                let gram = gram_identity_check(&field);
                let bres = boundary_condition_residual(&field, &n_out, &dom.face_indices(face))?;
                Ok(Check::new(
                    "killing",
                    "killing-gram-offdiagonal",
                    "boundary-adapted unitary initial data keeps the Gram matrix diagonal",
                    inp,
                    gram.max_off_diagonal,
                    1e-6,
                )
                .with_value("boundary_condition_residual", bres))
            },
        ));
    }
    {
        let h = *params.h_list.last().expect("nonempty h list");
        let (mn, mx) = (params.min.clone(), params.max.clone());
        let inp = base_inputs.clone();
        jobs.push(catching(
            "killing",
            "killing-type1-witness".into(),
            "type-I construction recovers its witness direction",
            inp.clone(),
            move || {
                let (rep, signs) = standard_diagonal_rep(3)?;
                let dom = GridDomain::new(mn, mx, h)?;
                let nu0 = vec![0.6, 0.0, 0.8];
                let v0 = type_one_initial(&rep, &nu0, 1.0)?;
                let mut init = eye(rep.m);
                init.set_column(0, &v0);
                let field = build_killing_basis_with(&rep, &signs, &dom, &[0, 0, 0], &init)?;
                let rpt = classify_type(&field, 0)?;
                if rpt.class != SpinorType::TypeI {
                    return Ok(Check::failed(
                        "killing",
                        "killing-type1-witness",
                        "type-I construction recovers its witness direction",
                        inp,
                        format!("expected a type-I classification, got {:?}", rpt.class),
                    ));
                }
                let witness = rpt.witness.clone().unwrap_or_default();
                let err = witness
                    .iter()
                    .zip(&nu0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
                    .max(rpt.witness_residual);
                Ok(Check::new(
                    "killing",
                    "killing-type1-witness",
                    "type-I construction recovers its witness direction",
                    inp,
                    err,
                    1e-6,
                )
                .with_value("classifier_constant", rpt.c)
                .with_value("eigen_sign", rpt.eigen_sign))
            },
        ));
    }
    for (id, n, metric, negative) in [
        ("killing-reconstruction-hyperbolic-even", 4usize, MetricKind::Hyperbolic, false),
        ("killing-reconstruction-control-even", 4, MetricKind::PerturbedConformal, true),
        ("killing-reconstruction-hyperbolic-odd", 3, MetricKind::Hyperbolic, false),
        ("killing-reconstruction-control-odd", 3, MetricKind::PerturbedConformal, true),
    ] {
        let inp = digest(&[&base_inputs, id]);
        let anchor = "constant-curvature reconstruction from transported spinors";
        jobs.push(catching(
            "killing",
            id.into(),
            anchor,
            inp.clone(),
            move || {
                let (rep, signs) = standard_diagonal_rep(n)?;
                let mut mx = vec![0.25; n];
                mx[0] = 1.25;
                if n == 4 {
                    mx[3] = 0.125;
                }
                let mut mn = vec![0.0; n];
                mn[0] = 1.0;
                let dom = GridDomain::new(mn, mx, 0.25 / 8.0)?;
                let field = build_killing_basis(&rep, &signs, &dom, &vec![0; n])?;
                let residual = curvature_reconstruction_residual(&field, metric, 5)?;
                let (measured, tol) = if negative {
                    // negative control: the perturbed metric must be detected
                    ((1e-3 - residual).max(0.0), 0.0)
                } else {
                    (residual, 1e-6)
                };
                Ok(Check::new("killing", id, anchor, inp, measured, tol)
                    .with_value("residual", residual))
            },
        ));
    }
    Ok(jobs)
}

// ---------------------------------------------------------------------------
// smooth-polytope
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct PolytopeParams {
    lambdas: Vec<f64>,
    directions: usize,
}

impl Default for PolytopeParams {
    fn default() -> Self {
        PolytopeParams { lambdas: vec![4.0, 8.0, 16.0, 32.0], directions: 64 }
    }
}

fn sample_directions(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dirs = Vec::new();
    for axis in 0..n {
        for s in [1.0, -1.0] {
            let mut d = vec![0.0; n];
            d[axis] = s;
            dirs.push(d);
        }
    }
    while dirs.len() < count {
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
        let norm: f64 = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            dirs.push(d.iter().map(|x| x / norm).collect());
        }
    }
    dirs
}

fn test_cube() -> rigidity_core::Result<ConvexPolytope> {
    ConvexPolytope::axis_box(&[1.0, -0.5, -0.5], &[2.0, 0.5, 0.5])
}

fn polytope_jobs(cfg: &SuiteConfig) -> Result<Vec<Job>, CliError> {
    let seed = cfg.require_seed("smooth-polytope")?;
    let params: PolytopeParams = cfg.typed_params()?;
    let lambdas = params.lambdas.clone();
    if lambdas.is_empty() {
        return Err(CliError::Config("smooth-polytope needs at least one lambda".into()));
    }
    let directions = params.directions.max(6);
    let base_inputs = digest(&[
        "smooth-polytope",
        &format!("{lambdas:?}"),
        &directions.to_string(),
        &seed.to_string(),
    ]);
    let mut jobs: Vec<Job> = Vec::new();
    {
        let lambdas = lambdas.clone();
        let inp = base_inputs.clone();
        jobs.push(catching(
            "smooth-polytope",
            "poly-level-set-root".into(),
            "boundary samples sit on the smoothed level set F = 1",
            inp.clone(),
            move || {
                let cube = test_cube()?;
                let dirs = sample_directions(3, directions, seed);
                let mut worst = 0.0f64;
                let mut range_violation = 0.0f64;
                let num_facets = cube.facets.len() as f64;
                for &l in &lambdas {
                    let sb = boundary_sample(&cube, l, &dirs)?;
                    let lower = -(num_facets.ln()) / l;
                    for s in &sb.samples {
                        worst = worst.max(s.f_residual);
                        range_violation = range_violation
                            .max(s.max_u)
                            .max(lower - s.max_u);
                    }
                }
                Ok(Check::new(
                    "smooth-polytope",
                    "poly-level-set-root",
                    "boundary samples sit on the smoothed level set F = 1",
                    inp.clone(),
                    worst,
                    1e-10,
                )
                .with_value("max_u_range_violation", range_violation))
            },
        ));
    }
    {
        let lambdas = lambdas.clone();
        let inp = base_inputs.clone();
        jobs.push(catching(
            "smooth-polytope",
            "poly-max-u-range".into(),
            "max_l u_l at samples lies in [-log|facets|/lambda, 0]",
            inp.clone(),
            move || {
                let cube = test_cube()?;
                let dirs = sample_directions(3, directions, seed);
                let num_facets = cube.facets.len() as f64;
                let mut violation = 0.0f64;
                for &l in &lambdas {
                    let sb = boundary_sample(&cube, l, &dirs)?;
                    let lower = -(num_facets.ln()) / l;
                    for s in &sb.samples {
                        violation = violation.max(s.max_u).max(lower - s.max_u);
                    }
                }
                Ok(Check::new(
                    "smooth-polytope",
                    "poly-max-u-range",
                    "max_l u_l at samples lies in [-log|facets|/lambda, 0]",
                    inp,
                    violation,
                    1e-9,
                ))
            },
        ));
    }
    {
        let inp = base_inputs.clone();
        jobs.push(catching(
            "smooth-polytope",
            "poly-sphere-oracle".into(),
            "unit sphere: trace norm of dN is n-1 and the hyperbolic defect is 0",
            inp.clone(),
            move || {
                let dirs = sample_directions(3, directions, seed ^ 0x5EA);
                let sb = sphere_oracle(&[3.0, 0.0, 0.0], 1.0, &dirs)?;
                let tns = trace_norm_dn(&sb, &BoundaryMetric::Euclidean)?;
                let tn_err = tns
                    .iter()
                    .map(|t| (t.trace_norm - 2.0).abs())
                    .fold(0.0f64, f64::max);
                let defects = boundary_defect_hyperbolic(&sb)?;
                let defect_err = defects.iter().map(|d| d.abs()).fold(0.0f64, f64::max);
                // trace-norm budget 1e-10, defect budget 1e-8; fold both
                // into one measurement on the tighter scale
                Ok(Check::new(
                    "smooth-polytope",
                    "poly-sphere-oracle",
                    "unit sphere: trace norm of dN is n-1 and the hyperbolic defect is 0",
                    inp,
                    tn_err.max(defect_err * 1e-2),
                    1e-10,
                )
                .with_value("max_defect", defect_err)
                .with_value("max_trace_norm_error", tn_err))
            },
        ));
    }
    {
        let inp = base_inputs.clone();
        jobs.push(catching(
            "smooth-polytope",
            "poly-halfspace-trivial".into(),
            "a single half-space smooths to itself with flat boundary data",
            inp.clone(),
            move || {
                let poly = ConvexPolytope::new(
                    vec![(vec![1.0, 0.0, 0.0], 2.0)],
                    vec![1.0, 0.0, 0.0],
                )?;
                // rays with a positive component toward the facet
                let mut dirs = vec![vec![1.0, 0.0, 0.0]];
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xFACE);
                while dirs.len() < 16 {
                    let mut d: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
                    d[0] = d[0].abs().max(0.3);
                    let norm: f64 = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                    dirs.push(d.iter().map(|x| x / norm).collect());
                }
                let sb = boundary_sample(&poly, 8.0, &dirs)?;
                let tns = trace_norm_dn(&sb, &BoundaryMetric::Euclidean)?;
                let defects = boundary_defect_hyperbolic(&sb)?;
                let mut worst = 0.0f64;
                for ((s, t), d) in sb.samples.iter().zip(&tns).zip(&defects) {
                    worst = worst
                        .max(s.dn.abs().max())
                        .max(s.h_delta.abs())
                        .max(t.trace_norm)
                        .max(d.abs())
                        .max(s.max_u.abs());
                }
                Ok(Check::new(
                    "smooth-polytope",
                    "poly-halfspace-trivial",
                    "a single half-space smooths to itself with flat boundary data",
                    inp,
                    worst,
                    1e-10,
                ))
            },
        ));
    }
    {
        let lambdas = lambdas.clone();
        let inp = base_inputs.clone();
        jobs.push(catching(
            "smooth-polytope",
            "poly-defect-monotone".into(),
            "hyperbolic boundary defect magnitude is non-increasing in lambda",
            inp.clone(),
            move || {
                let cube = test_cube()?;
                let dirs = sample_directions(3, directions, seed ^ 0xDEF);
                let mut rows = Vec::new();
                for &l in &lambdas {
                    let sb = boundary_sample(&cube, l, &dirs)?;
                    let defects = boundary_defect_hyperbolic(&sb)?;
                    let max_abs_defect = defects.iter().map(|d| d.abs()).fold(0.0f64, f64::max);
                    rows.push((l, max_abs_defect));
                }
                let vals: Vec<f64> = rows.iter().map(|r| r.1).collect();
                Ok(Check::new(
                    "smooth-polytope",
                    "poly-defect-monotone",
                    "hyperbolic boundary defect magnitude is non-increasing in lambda",
                    inp,
                    max_window_increase(&vals),
                    1e-12,
                )
                .with_series(Series {
                    x_label: "lambda".into(),
                    y_label: "max |defect|".into(),
                    log_log: false,
                    points: rows,
                }))
            },
        ));
    }
    {
        let lambdas = lambdas.clone();
        let inp = base_inputs.clone();
        jobs.push(catching(
            "smooth-polytope",
            "poly-normal-deviation".into(),
            "Gauss map deviation at facet witnesses is non-increasing in lambda",
            inp.clone(),
            move || {
                let cube = test_cube()?;
                let rows = smoothing_convergence(&cube, &lambdas, 64, seed)?;
                let nd: Vec<f64> = rows.iter().map(|r| r.normal_deviation).collect();
                let dh: Vec<f64> = rows.iter().map(|r| r.hausdorff).collect();
                Ok(Check::new(
                    "smooth-polytope",
                    "poly-normal-deviation",
                    "Gauss map deviation at facet witnesses is non-increasing in lambda",
                    inp,
                    max_window_increase(&nd).max(max_window_increase(&dh)),
                    1e-12,
                )
                .with_series(Series {
                    x_label: "lambda".into(),
                    y_label: "Hausdorff estimate".into(),
                    log_log: false,
                    points: rows.iter().map(|r| (r.lambda, r.hausdorff)).collect(),
                }))
            },
        ));
    }
    {
        let lambdas = lambdas.clone();
        let inp = base_inputs;
        jobs.push(catching(
            "smooth-polytope",
            "poly-convexity".into(),
            "tangential Hessian of the smoothed level function stays PSD",
            inp.clone(),
            move || {
                let cube = test_cube()?;
                let dirs = sample_directions(3, directions, seed ^ 0xC0);
                let mut min_eig = f64::INFINITY;
                for &l in &lambdas {
                    let sb = boundary_sample(&cube, l, &dirs)?;
                    min_eig = min_eig.min(convexity_min_eigen(&sb));
                }
                Ok(Check::new(
                    "smooth-polytope",
                    "poly-convexity",
                    "tangential Hessian of the smoothed level function stays PSD",
                    inp,
                    (-min_eig).max(0.0),
                    1e-10,
                )
                .with_value("min_eigenvalue", min_eig))
            },
        ));
    }
    Ok(jobs)
}

// ---------------------------------------------------------------------------
// sl-residual
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SlParams {
    h_list: Vec<f64>,
    anticommutation_trials: usize,
    sweep_draws: usize,
}

impl Default for SlParams {
    fn default() -> Self {
        SlParams {
            h_list: vec![1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
            anticommutation_trials: 10_000,
            sweep_draws: 500,
        }
    }
}

fn sl_phi(x: &[f64]) -> f64 {
    (x[0] + 0.3 * x[1]).sin()
}

fn sl_grad_phi(x: &[f64]) -> Vec<f64> {
    let c = (x[0] + 0.3 * x[1]).cos();
    let mut g = vec![0.0; x.len()];
    g[0] = c;
    g[1] = 0.3 * c;
    g
}

/// Manufactured spinor tuple: low-degree polynomial times a Gaussian
/// envelope centered in the box.
fn manufactured_field(m: usize, n: usize, center: Vec<f64>, seed: u64) -> impl Fn(&[f64]) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = || {
        CMat::from_fn(m, m, |_, _| {
            C64::new(rng.gen_range(-1.0f64..1.0), rng.gen_range(-1.0f64..1.0))
        })
    };
    let a = random();
    let b: Vec<CMat> = (0..n).map(|_| random()).collect();
    let c = random();
    move |x: &[f64]| {
        let mut acc = a.clone();
        let mut r2 = 0.0;
        for i in 0..n {
            acc += b[i].map(|z| C64::new(x[i] - center[i], 0.0) * z);
            r2 += (x[i] - center[i]) * (x[i] - center[i]);
        }
        acc += c.map(|z| C64::new(r2, 0.0) * z);
        acc.map(|z| C64::new((-2.0 * r2).exp(), 0.0) * z)
    }
}

fn sl_jobs(cfg: &SuiteConfig) -> Result<Vec<Job>, CliError> {
    let seed = cfg.require_seed("sl-residual")?;
    let params: SlParams = cfg.typed_params()?;
    let base_inputs = digest(&[
        "sl-residual",
        &format!("{:?}", params.h_list),
        &params.anticommutation_trials.to_string(),
        &params.sweep_draws.to_string(),
        &seed.to_string(),
    ]);
    let mut jobs: Vec<Job> = Vec::new();
    for (id, n, mode) in [
        ("sl-anticommutation-even", 4usize, ParityMode::EvenGrading),
        ("sl-anticommutation-odd", 3, ParityMode::OddVolume),
    ] {
        let trials = params.anticommutation_trials;
        let inp = digest(&[&base_inputs, id]);
        let anchor = "the boundary Dirac operator anticommutes with chi";
        jobs.push(catching("sl-residual", id.into(), anchor, inp.clone(), move || {
            let rep = build_clifford_rep(n)?;
            let mut mn = vec![0.0; n];
            mn[0] = 1.0;
            let mut mx = vec![0.5; n];
            mx[0] = 1.5;
            let dom = GridDomain::new(mn, mx, 0.25)?;
            let assembly = assemble_operators(&rep, &dom, mode, PsiData::Constant)?;
            let res = boundary_anticommutation_check(&assembly, trials, seed)?;
            Ok(Check::new("sl-residual", id, anchor, inp, res, 1e-12))
        }));
    }
    for (id, n, mode) in [
        ("sl-chi-pairing-even", 4usize, ParityMode::EvenGrading),
        ("sl-chi-pairing-odd", 3, ParityMode::OddVolume),
    ] {
        let inp = digest(&[&base_inputs, id]);
        let anchor = "chi_lambda involution, self-adjointness and pairing reductions";
        jobs.push(catching("sl-residual", id.into(), anchor, inp.clone(), move || {
            let rep = build_clifford_rep(n)?;
            let rpt = chi_lambda_pairing_check(&rep, mode, 300, seed)?;
            let worst = rpt
                .involution
                .max(rpt.self_adjoint)
                .max(rpt.orthogonal_pairing)
                .max(rpt.reduction);
            Ok(Check::new("sl-residual", id, anchor, inp, worst, 1e-12)
                .with_value("involution", rpt.involution)
                .with_value("self_adjoint", rpt.self_adjoint)
                .with_value("orthogonal_pairing", rpt.orthogonal_pairing)
                .with_value("reduction", rpt.reduction))
        }));
    }
    {
        let h_list = params.h_list.clone();
        let inp = digest(&[&base_inputs, "sl-flat-order"]);
        let anchor = "integrated Lichnerowicz identity converges at second order";
        jobs.push(catching("sl-residual", "sl-flat-order".into(), anchor, inp.clone(), move || {
            let rep = build_clifford_rep(2)?;
            let h0 = *h_list.first().expect("nonempty h list");
            let dom = GridDomain::new(vec![1.0, 0.0], vec![2.0, 1.0], h0)?;
            let assembly = assemble_operators(
                &rep,
                &dom,
                ParityMode::EvenGrading,
                PsiData::Synthetic { phi: sl_phi, grad: sl_grad_phi },
            )?;
            let sigma = manufactured_field(rep.m, 2, vec![1.5, 0.5], seed);
            let reports = sl_identity_residual(&assembly, &sigma, &h_list)?;
            let rows: Vec<(f64, f64)> =
                reports.iter().map(|r| (r.h, r.residual.abs())).collect();
            let order = observed_order(&rows);
            let last = reports.last().expect("at least one grid step");
            let mut check = Check::new(
                "sl-residual",
                "sl-flat-order",
                anchor,
                inp,
                (order - 2.0).abs(),
                0.2,
            )
            .with_value("order", order)
            .with_series(Series {
                x_label: "h".into(),
                y_label: "identity residual".into(),
                log_log: true,
                points: rows,
            });
            check = check
                .with_value("lhs", last.lhs)
                .with_value("grad_term", last.grad_term)
                .with_value("r_term", last.r_term)
                .with_value("psi_grad_term", last.psi_grad_term)
                .with_value("psi_sq_term", last.psi_sq_term)
                .with_value("boundary_dirac_term", last.boundary_dirac_term)
                .with_value("a_term", last.a_term)
                .with_value("boundary_psi_raw", last.boundary_psi_raw);
            Ok(check)
        }));
    }
    {
        let h_list = params.h_list.clone();
        let inp = digest(&[&base_inputs, "sl-terms-finite"]);
        let anchor = "every term of the integrated identity is finite";
        jobs.push(catching("sl-residual", "sl-terms-finite".into(), anchor, inp.clone(), move || {
            let rep = build_clifford_rep(2)?;
            let h0 = *h_list.first().expect("nonempty h list");
            let dom = GridDomain::new(vec![1.0, 0.0], vec![2.0, 1.0], h0)?;
            let assembly = assemble_operators(
                &rep,
                &dom,
                ParityMode::EvenGrading,
                PsiData::Synthetic { phi: sl_phi, grad: sl_grad_phi },
            )?;
            let sigma = manufactured_field(rep.m, 2, vec![1.5, 0.5], seed ^ 1);
            let reports = sl_identity_residual(&assembly, &sigma, &h_list)?;
            let mut finite = true;
            let mut largest = 0.0f64;
            for r in &reports {
                for term in [
                    r.lhs,
                    r.grad_term,
                    r.r_term,
                    r.psi_grad_term,
                    r.psi_sq_term,
                    r.boundary_dirac_term,
                    r.a_term,
                    r.boundary_psi_raw,
                    r.residual,
                ] {
                    finite &= term.is_finite();
                    largest = largest.max(term.abs());
                }
            }
            Ok(Check::new(
                "sl-residual",
                "sl-terms-finite",
                anchor,
                inp,
                if finite { 0.0 } else { f64::INFINITY },
                0.5,
            )
            .with_value("largest_term", largest))
        }));
    }
    {
        let draws = params.sweep_draws;
        let inp = digest(&[&base_inputs, "sl-curvature-sweep"]);
        let anchor = "curvature endomorphism dominates its closed-form lower bound";
        jobs.push(catching("sl-residual", "sl-curvature-sweep".into(), anchor, inp.clone(), move || {
            let rep = build_clifford_rep(4)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fiber = FiberKind::RoundSphere { r_h: 6.0 };
            let mut min_margin = f64::INFINITY;
            for _ in 0..draws {
                let psi = rng.gen_range(0.5f64..2.0);
                let mu: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..1.0 / psi)).collect();
                let rpt = curvature_endomorphism_bound(&rep, fiber, psi, &mu)?;
                min_margin = min_margin.min(rpt.margin);
            }
            Ok(Check::new(
                "sl-residual",
                "sl-curvature-sweep",
                anchor,
                inp,
                (-min_margin).max(0.0),
                1e-10,
            )
            .with_value("min_margin", min_margin)
            .with_value("draws", draws as f64))
        }));
    }
    {
        let inp = digest(&[&base_inputs, "sl-curvature-equality"]);
        let anchor = "the curvature bound is attained at unit stretch";
        jobs.push(catching("sl-residual", "sl-curvature-equality".into(), anchor, inp.clone(), move || {
            let rep = build_clifford_rep(4)?;
            let psi = 1.3;
            let mu = vec![1.0 / psi; 3];
            let rpt = curvature_endomorphism_bound(&rep, FiberKind::RoundSphere { r_h: 6.0 }, psi, &mu)?;
            Ok(Check::new(
                "sl-residual",
                "sl-curvature-equality",
                anchor,
                inp,
                (rpt.min_eigenvalue - rpt.bound).abs(),
                1e-8,
            )
            .with_value("bound", rpt.bound))
        }));
    }
    {
        let draws = params.sweep_draws.min(200);
        let inp = digest(&[&base_inputs, "sl-boundary-sweep"]);
        let anchor = "boundary endomorphism dominates its mean-curvature bound";
        jobs.push(catching("sl-residual", "sl-boundary-sweep".into(), anchor, inp.clone(), move || {
            let rep = build_clifford_rep(4)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB0);
            let psi = 1.3;
            let mut min_margin = f64::INFINITY;
            for _ in 0..draws {
                let raw = DMatrix::<f64>::from_fn(3, 3, |_, _| rng.gen_range(-1.0f64..1.0));
                let a_form = &raw * raw.transpose(); // PSD
                let mu: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..1.0 / psi)).collect();
                let rpt = boundary_endomorphism_bound(&rep, &a_form, psi, &mu)?;
                min_margin = min_margin.min(rpt.margin);
            }
            // umbilic equality case
            let a_form = DMatrix::<f64>::identity(3, 3) * 0.7;
            let mu = vec![1.0 / psi; 3];
            let eq = boundary_endomorphism_bound(&rep, &a_form, psi, &mu)?;
            // sweep budget 1e-10, umbilic equality budget 1e-8
            let equality_gap = (eq.min_eigenvalue - eq.bound).abs();
            Ok(Check::new(
                "sl-residual",
                "sl-boundary-sweep",
                anchor,
                inp,
                (-min_margin).max(0.0).max(equality_gap * 1e-2),
                1e-10,
            )
            .with_value("min_margin", min_margin)
            .with_value("umbilic_equality_gap", equality_gap))
        }));
    }
    Ok(jobs)
}

// ---------------------------------------------------------------------------
// tracenorm
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct TracenormParams {
    draws: usize,
    n_max: usize,
    mc_samples: usize,
    sweep_mc_samples: usize,
}

impl Default for TracenormParams {
    fn default() -> Self {
        TracenormParams { draws: 1000, n_max: 6, mc_samples: 100_000, sweep_mc_samples: 64 }
    }
}

fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    loop {
        let l = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0f64..1.0));
        let smin = l
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if smin > 0.15 {
            return l;
        }
    }
}

fn tracenorm_jobs(cfg: &SuiteConfig) -> Result<Vec<Job>, CliError> {
    let seed = cfg.require_seed("tracenorm")?;
    let params: TracenormParams = cfg.typed_params()?;
    let base_inputs = digest(&[
        "tracenorm",
        &params.draws.to_string(),
        &params.n_max.to_string(),
        &params.mc_samples.to_string(),
        &seed.to_string(),
    ]);
    let mut jobs: Vec<Job> = Vec::new();
    {
        let (draws, n_max, sweep_mc) = (params.draws, params.n_max.clamp(2, 6), params.sweep_mc_samples);
        let inp = digest(&[&base_inputs, "tracenorm-ordering"]);
        let anchor = "weighted trace norm never exceeds the unweighted one";
        jobs.push(catching("tracenorm", "tracenorm-ordering".into(), anchor, inp.clone(), move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst = f64::NEG_INFINITY;
            for k in 0..draws {
                let n = 2 + (k % (n_max - 1));
                let l = random_invertible(n, &mut rng);
                let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0f64..4.0)).collect();
                let rpt = trace_norm_comparison(&l, &mu, sweep_mc, seed ^ k as u64)?;
                worst = worst.max(rpt.tn2 - rpt.tn1);
            }
            Ok(Check::new(
                "tracenorm",
                "tracenorm-ordering",
                anchor,
                inp,
                worst.max(0.0),
                1e-9,
            )
            .with_value("draws", draws as f64)
            .with_value("max_tn2_minus_tn1", worst))
        }));
    }
    {
        let inp = digest(&[&base_inputs, "tracenorm-worked-example"]);
        let anchor = "diag(1,2) against weights (4,1): trace norms 3 and 2.5";
        jobs.push(catching("tracenorm", "tracenorm-worked-example".into(), anchor, inp.clone(), move || {
            let l = DMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0]));
            let rpt = trace_norm_comparison(&l, &[4.0, 1.0], 1000, seed)?;
            Ok(Check::new(
                "tracenorm",
                "tracenorm-worked-example",
                anchor,
                inp,
                (rpt.tn1 - 3.0).abs().max((rpt.tn2 - 2.5).abs()),
                1e-12,
            )
            .with_value("tn1", rpt.tn1)
            .with_value("tn2", rpt.tn2))
        }));
    }
    for n in 2..=4usize {
        let mc = params.mc_samples;
        let id = format!("tracenorm-mc-agreement-n{n}");
        let inp = digest(&[&base_inputs, &id]);
        let anchor = "Monte-Carlo orthogonal sup reaches the singular value sum";
        let idc = id.clone();
        jobs.push(catching("tracenorm", id, anchor, inp.clone(), move || {
            // skewed spectra keep the near-optimal rotation cap wide enough
            // for a Haar sample of this size to land in it
            let (diag, mu): (Vec<f64>, Vec<f64>) = match n {
                2 => (vec![1.0, 2.0], vec![4.0, 1.0]),
                3 => (vec![2.0, 0.3, 0.2], vec![1.0, 4.0, 4.0]),
                _ => (vec![2.0, 0.002, 0.002, 0.002], vec![1.0, 4.0, 4.0, 4.0]),
            };
            let l = DMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_vec(diag));
            let rpt = trace_norm_comparison(&l, &mu, mc, seed)?;
            let gap = (rpt.tn2 - rpt.mc_max) / rpt.tn2;
            Ok(Check::new("tracenorm", &idc, anchor, inp, gap, 0.01)
                .with_value("tn2", rpt.tn2)
                .with_value("mc_max", rpt.mc_max))
        }));
    }
    Ok(jobs)
}
