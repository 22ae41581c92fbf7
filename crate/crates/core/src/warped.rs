//! Warped-product metrics g₀ = dr² + φ(r)²h: closed-form curvature,
//! boundary mean curvature, the conformal product model g₀ = ψ(s)²(ds² + h),
//! log-concavity of the warp profile, rotational-domain dihedral angles and
//! face umbilicity in the Poincaré half-space model.

use nalgebra::DMatrix;

use crate::{Error, Result};

// ---------------------------------------------------------------------------
// warp profiles
// ---------------------------------------------------------------------------

/// Natural cubic spline through (x_i, y_i) with analytic derivatives.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// second derivatives at the knots
    m2: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 3 || ys.len() != n {
            return Err(Error::InvalidInput(
                "spline needs at least 3 knots with matching values".into(),
            ));
        }
        if !xs.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidInput("spline knots must be increasing".into()));
        }
        // tridiagonal system for interior second derivatives (Thomas algorithm)
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        diag[0] = 1.0;
        diag[n - 1] = 1.0;
        for i in 1..n - 1 {
            let h0 = xs[i] - xs[i - 1];
            let h1 = xs[i + 1] - xs[i];
            sub[i] = h0;
            diag[i] = 2.0 * (h0 + h1);
            sup[i] = h1;
            rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
        }
        for i in 1..n {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m2 = vec![0.0; n];
        m2[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m2[i] = (rhs[i] - sup[i] * m2[i + 1]) / diag[i];
        }
        Ok(Self { xs, ys, m2 })
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m2[i] + (b * b * b - b) * self.m2[i + 1]) * h * h / 6.0
    }

    pub fn d1(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        (self.ys[i + 1] - self.ys[i]) / h
            + ((3.0 * b * b - 1.0) * self.m2[i + 1] - (3.0 * a * a - 1.0) * self.m2[i]) * h / 6.0
    }

    pub fn d2(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.m2[i] + b * self.m2[i + 1]
    }
}

/// Analytic warp profile families plus spline-backed samples.
#[derive(Debug, Clone)]
pub enum ProfileKind {
    /// φ ≡ c
    Constant(f64),
    /// φ(r) = e^{k r}
    ExpRate(f64),
    /// φ(r) = r
    Linear,
    /// φ(r) = sin r
    Sin,
    /// φ(r) = cosh r
    Cosh,
    /// φ(r) = sech r
    Sech,
    /// φ(r) = 1/r
    Reciprocal,
    /// cubic spline of (r, φ) samples; derivatives are the spline's own
    Spline(CubicSpline),
}

/// Warp profile φ on [r−, r+], positive with nonvanishing endpoints.
#[derive(Debug, Clone)]
pub struct WarpProfile {
    pub kind: ProfileKind,
    pub r_minus: f64,
    pub r_plus: f64,
}

impl WarpProfile {
    pub fn new(kind: ProfileKind, r_minus: f64, r_plus: f64) -> Result<Self> {
        if !(r_minus < r_plus) {
            return Err(Error::InvalidInput(format!(
                "empty interval [{r_minus}, {r_plus}]"
            )));
        }
        let p = Self {
            kind,
            r_minus,
            r_plus,
        };
        // positivity on a dense sample, endpoints included
        for k in 0..=256 {
            let r = r_minus + (r_plus - r_minus) * k as f64 / 256.0;
            if p.value(r) <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "warp profile must be positive; φ({r}) = {}",
                    p.value(r)
                )));
            }
        }
        Ok(p)
    }

    pub fn contains(&self, r: f64) -> bool {
        r >= self.r_minus - 1e-12 && r <= self.r_plus + 1e-12
    }

    pub fn value(&self, r: f64) -> f64 {
        match &self.kind {
            ProfileKind::Constant(c) => *c,
            ProfileKind::ExpRate(k) => (k * r).exp(),
            ProfileKind::Linear => r,
            ProfileKind::Sin => r.sin(),
            ProfileKind::Cosh => r.cosh(),
            ProfileKind::Sech => r.cosh().recip(),
            ProfileKind::Reciprocal => r.recip(),
            ProfileKind::Spline(s) => s.value(r),
        }
    }

    pub fn d1(&self, r: f64) -> f64 {
        match &self.kind {
            ProfileKind::Constant(_) => 0.0,
            ProfileKind::ExpRate(k) => k * (k * r).exp(),
            ProfileKind::Linear => 1.0,
            ProfileKind::Sin => r.cos(),
            ProfileKind::Cosh => r.sinh(),
            ProfileKind::Sech => -r.tanh() / r.cosh(),
            ProfileKind::Reciprocal => -r.powi(-2),
            ProfileKind::Spline(s) => s.d1(r),
        }
    }

    pub fn d2(&self, r: f64) -> f64 {
        match &self.kind {
            ProfileKind::Constant(_) => 0.0,
            ProfileKind::ExpRate(k) => k * k * (k * r).exp(),
            ProfileKind::Linear => 0.0,
            ProfileKind::Sin => -r.sin(),
            ProfileKind::Cosh => r.cosh(),
            ProfileKind::Sech => {
                let t = r.tanh();
                (2.0 * t * t - 1.0) / r.cosh()
            }
            ProfileKind::Reciprocal => 2.0 * r.powi(-3),
            ProfileKind::Spline(s) => s.d2(r),
        }
    }
}

/// Warped-product metric data: dimension, warp profile, fiber curvature.
#[derive(Debug, Clone)]
pub struct WarpedMetricSpec {
    pub n: usize,
    pub profile: WarpProfile,
    /// scalar curvature of the fiber (X, h); constant fibers suffice here
    pub fiber_scalar_curvature: f64,
    pub fiber_ricci_positive: bool,
    pub fiber_curvature_operator_nonneg: bool,
}

impl WarpedMetricSpec {
    pub fn new(n: usize, profile: WarpProfile, fiber_scalar_curvature: f64) -> Result<Self> {
        if n <= 2 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(Self {
            n,
            profile,
            fiber_scalar_curvature,
            fiber_ricci_positive: false,
            fiber_curvature_operator_nonneg: false,
        })
    }
}

// ---------------------------------------------------------------------------
// closed-form curvature quantities
// ---------------------------------------------------------------------------

/// R(r) = R_h/φ² − n(n−1)(φ′/φ)² − 2(n−1)(φ′/φ)′.
pub fn scalar_curvature_warped(spec: &WarpedMetricSpec, r: f64) -> Result<f64> {
    if !spec.profile.contains(r) {
        return Err(Error::Domain(format!("r = {r} outside the warp interval")));
    }
    let n = spec.n as f64;
    let phi = spec.profile.value(r);
    let lp = spec.profile.d1(r) / phi; // φ′/φ
    let lp_prime = spec.profile.d2(r) / phi - lp * lp; // (φ′/φ)′
    Ok(spec.fiber_scalar_curvature / (phi * phi) - n * (n - 1.0) * lp * lp
        - 2.0 * (n - 1.0) * lp_prime)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// H(∂±M) = ±(n−1) φ(r±)⁻¹ φ′(r±), inward-normal convention.
pub fn boundary_mean_curvature(spec: &WarpedMetricSpec, side: Side) -> f64 {
    let n = spec.n as f64;
    match side {
        Side::Plus => {
            let r = spec.profile.r_plus;
            (n - 1.0) * spec.profile.d1(r) / spec.profile.value(r)
        }
        Side::Minus => {
            let r = spec.profile.r_minus;
            -(n - 1.0) * spec.profile.d1(r) / spec.profile.value(r)
        }
    }
}

#[derive(Debug, Clone)]
pub struct LogConcavityReport {
    /// min over the sample grid of −(log φ)″
    pub min_value: f64,
    /// strictly log-concave on the grid
    pub strict: bool,
}

pub fn log_concavity_report(profile: &WarpProfile, samples: usize) -> Result<LogConcavityReport> {
    if samples < 2 {
        return Err(Error::InvalidInput("need at least 2 samples".into()));
    }
    let mut min_value = f64::INFINITY;
    for k in 0..samples {
        let r = profile.r_minus
            + (profile.r_plus - profile.r_minus) * k as f64 / (samples - 1) as f64;
        let phi = profile.value(r);
        let lp = profile.d1(r) / phi;
        // −(log φ)″ = (φ′/φ)² − φ″/φ
        let v = lp * lp - profile.d2(r) / phi;
        min_value = min_value.min(v);
    }
    Ok(LogConcavityReport {
        min_value,
        strict: min_value > 0.0,
    })
}

/// H_{g₀} = ψ⁻¹ H_ḡ − (n−1) ψ⁻² ē_n(ψ).
pub fn conformal_mean_curvature(h_bar: f64, psi: f64, dpsi_dn: f64, n: usize) -> Result<f64> {
    if psi <= 0.0 {
        return Err(Error::Domain(format!("conformal factor ψ = {psi} <= 0")));
    }
    Ok(h_bar / psi - (n as f64 - 1.0) * dpsi_dn / (psi * psi))
}

// ---------------------------------------------------------------------------
// conformal reparametrization
// ---------------------------------------------------------------------------

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
}

fn adaptive_simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let mid = 0.5 * (a + b);
    let left = simpson(f, a, mid);
    let right = simpson(f, mid, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson_rec(f, a, mid, left, tol / 2.0, depth - 1)
            + adaptive_simpson_rec(f, mid, b, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fr = &f as &dyn Fn(f64) -> f64;
    adaptive_simpson_rec(fr, a, b, simpson(fr, a, b), tol, 48)
}

/// The conformal model g₀ = ψ(s)²(ds² + h) of a warped product, with
/// s(r) = ∫ φ⁻¹ and ψ(s) = φ(r(s)).
#[derive(Debug, Clone)]
pub struct ConformalModel {
    profile: WarpProfile,
    pub s_max: f64,
    pub quad_tol: f64,
}

impl ConformalModel {
    pub fn s_of_r(&self, r: f64) -> Result<f64> {
        if !self.profile.contains(r) {
            return Err(Error::Domain(format!("r = {r} outside the warp interval")));
        }
        Ok(adaptive_simpson(
            |t| self.profile.value(t).recip(),
            self.profile.r_minus,
            r,
            self.quad_tol,
        ))
    }

    /// Invert the strictly increasing map s(r) by bisection to 1e−12.
    pub fn r_of_s(&self, s: f64) -> Result<f64> {
        if !(-1e-10..=self.s_max + 1e-10).contains(&s) {
            return Err(Error::Domain(format!("s = {s} outside [0, {}]", self.s_max)));
        }
        let mut lo = self.profile.r_minus;
        let mut hi = self.profile.r_plus;
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if self.s_of_r(mid)? < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    pub fn psi(&self, s: f64) -> Result<f64> {
        Ok(self.profile.value(self.r_of_s(s)?))
    }

    /// dψ/ds = φ′(r(s)) φ(r(s)).
    pub fn dpsi_ds(&self, s: f64) -> Result<f64> {
        let r = self.r_of_s(s)?;
        Ok(self.profile.d1(r) * self.profile.value(r))
    }

    /// ψ′/ψ² = φ′/φ evaluated at r(s); the quantity driving Ψ downstream.
    pub fn psi_prime_over_psi_sq(&self, s: f64) -> Result<f64> {
        let r = self.r_of_s(s)?;
        Ok(self.profile.d1(r) / self.profile.value(r))
    }

    /// max over a dense grid of |ψ(s(r)) − φ(r)|.
    pub fn psi_residual(&self, samples: usize) -> Result<f64> {
        let mut worst = 0.0f64;
        for k in 0..=samples {
            let r = self.profile.r_minus
                + (self.profile.r_plus - self.profile.r_minus) * k as f64 / samples as f64;
            let s = self.s_of_r(r)?;
            worst = worst.max((self.psi(s)? - self.profile.value(r)).abs());
        }
        Ok(worst)
    }

    /// Pull ψ(s)²(ds² + h) back through s(r) and compare with dr² + φ²h:
    /// max of |ψ² (ds/dr)² − 1| and |ψ²/φ² − 1| over a dense grid.
    pub fn metric_residual(&self, samples: usize) -> Result<f64> {
        let mut worst = 0.0f64;
        for k in 0..=samples {
            let r = self.profile.r_minus
                + (self.profile.r_plus - self.profile.r_minus) * k as f64 / samples as f64;
            let s = self.s_of_r(r)?;
            let psi = self.psi(s)?;
            let phi = self.profile.value(r);
            let ds_dr = phi.recip();
            worst = worst.max((psi * psi * ds_dr * ds_dr - 1.0).abs());
            worst = worst.max((psi * psi / (phi * phi) - 1.0).abs());
        }
        Ok(worst)
    }
}

pub fn reparametrize(spec: &WarpedMetricSpec, quad_tol: f64) -> Result<ConformalModel> {
    let profile = spec.profile.clone();
    let s_max = adaptive_simpson(
        |t| profile.value(t).recip(),
        profile.r_minus,
        profile.r_plus,
        quad_tol,
    );
    if !(s_max > 0.0) {
        return Err(Error::Inconsistent(
            "s(r) is not increasing; warp profile not positive?".into(),
        ));
    }
    let model = ConformalModel {
        profile,
        s_max,
        quad_tol,
    };
    // ψ(s(r)) = φ(r) on a dense sample
    let res = model.psi_residual(64)?;
    if res > quad_tol.max(1e-9) * 1e3 {
        return Err(Error::Inconsistent(format!(
            "conformal model residual {res} exceeds tolerance"
        )));
    }
    Ok(model)
}

// ---------------------------------------------------------------------------
// rotational domains
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct AngleSample {
    pub gamma: f64,
    pub dgamma_dr: f64,
}

fn cos_gamma(profile: &WarpProfile, tau: &dyn Fn(f64) -> f64, r: f64) -> f64 {
    let h = 1e-6 * r.abs().max(1.0);
    let tp = (tau(r + h) - tau(r - h)) / (2.0 * h);
    let tp_phi = tp * profile.value(r);
    -tp_phi / (tp_phi * tp_phi + 1.0).sqrt()
}

/// Dihedral angle γ of a rotationally symmetric domain boundary,
/// cos γ = −τ′φ/√((τ′φ)² + 1), and its radial derivative.
pub fn rotational_domain_angle(
    profile: &WarpProfile,
    tau: impl Fn(f64) -> f64,
    r: f64,
) -> AngleSample {
    let t = &tau as &dyn Fn(f64) -> f64;
    let gamma = cos_gamma(profile, t, r).acos();
    let h = 1e-5 * r.abs().max(1.0);
    let gp = cos_gamma(profile, t, r + h).acos();
    let gm = cos_gamma(profile, t, r - h).acos();
    AngleSample {
        gamma,
        dgamma_dr: (gp - gm) / (2.0 * h),
    }
}

#[derive(Debug, Clone)]
pub struct AngleProfile {
    pub samples: Vec<(f64, AngleSample)>,
    /// γ′(r) < 0 over the whole grid (the boundary analog of log-concavity)
    pub monotone_decreasing: bool,
}

pub fn rotational_domain_angle_grid(
    profile: &WarpProfile,
    tau: impl Fn(f64) -> f64,
    samples: usize,
) -> AngleProfile {
    let mut out = Vec::with_capacity(samples);
    let pad = (profile.r_plus - profile.r_minus) * 1e-3;
    for k in 0..samples {
        let r = profile.r_minus
            + pad
            + (profile.r_plus - profile.r_minus - 2.0 * pad) * k as f64 / (samples - 1) as f64;
        out.push((r, rotational_domain_angle(profile, &tau, r)));
    }
    let monotone = out
        .windows(2)
        .all(|w| w[1].1.gamma <= w[0].1.gamma + 1e-12);
    AngleProfile {
        samples: out,
        monotone_decreasing: monotone,
    }
}

// ---------------------------------------------------------------------------
// face umbilicity in the half-space model
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct UmbilicityReport {
    /// shape-operator eigenvalues per sample point
    pub principal_curvatures: Vec<Vec<f64>>,
    /// max |κ_i − ⟨∂_{x¹}, N⟩| over all samples and eigenvalues
    pub max_deviation: f64,
}

/// Christoffel symbols of b = (x¹)⁻²δ: Γ^k_{ij} = −(δ_{i1}δ_{jk} + δ_{j1}δ_{ik}
/// − δ_{ij}δ_{k1})/x¹.
pub fn hyperbolic_christoffel(x1: f64, i: usize, j: usize, k: usize) -> f64 {
    let d = |a: usize, b: usize| (a == b) as i32 as f64;
    -(d(i, 0) * d(j, k) + d(j, 0) * d(i, k) - d(i, j) * d(k, 0)) / x1
}

/// Shape operator of the linear hyperplane through the sample points with
/// Euclidean unit normal N, with respect to the hyperbolic metric, computed
/// from the conformal second-fundamental-form formula (b-covariant derivative
/// of the b-unit normal field ν = x¹N along a b-orthonormal tangent frame).
pub fn hyperbolic_face_umbilicity(n_normal: &[f64], points: &[Vec<f64>]) -> Result<UmbilicityReport> {
    let n = n_normal.len();
    let nn: f64 = n_normal.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (nn - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitVector(nn));
    }
    if points.is_empty() {
        return Err(Error::InvalidInput("no sample points".into()));
    }
    let offset: f64 = points[0].iter().zip(n_normal).map(|(p, a)| p * a).sum();
    // Euclidean-orthonormal tangent frame of the hyperplane
    let mut frame: Vec<Vec<f64>> = Vec::new();
    for axis in 0..n {
        let mut v: Vec<f64> = (0..n).map(|i| (i == axis) as i32 as f64).collect();
        let pn: f64 = v.iter().zip(n_normal).map(|(a, b)| a * b).sum();
        for (vi, ni) in v.iter_mut().zip(n_normal) {
            *vi -= pn * ni;
        }
        for t in &frame {
            let pt: f64 = v.iter().zip(t).map(|(a, b)| a * b).sum();
            for (vi, ti) in v.iter_mut().zip(t) {
                *vi -= pt * ti;
            }
        }
        let norm: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            frame.push(v);
        }
        if frame.len() == n - 1 {
            break;
        }
    }
    let mut curvatures = Vec::with_capacity(points.len());
    let mut worst = 0.0f64;
    let target = n_normal[0];
    for p in points {
        let on_plane: f64 = p.iter().zip(n_normal).map(|(a, b)| a * b).sum::<f64>() - offset;
        if on_plane.abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "sample point off the hyperplane by {on_plane}"
            )));
        }
        let x1 = p[0];
        if x1 <= 0.0 {
            return Err(Error::Domain("sample point outside the half-space".into()));
        }
        // S_{ij} = −b(∇^b_{E_i} ν, E_j), ν = x¹N, E_i = x¹ t_i
        let mut s = DMatrix::<f64>::zeros(n - 1, n - 1);
        for (i, ti) in frame.iter().enumerate() {
            // (∇_{E_i} ν)^k = E_i(ν^k) + Γ^k_{lj} E_i^l ν^j
            let mut dv = vec![0.0; n];
            for k in 0..n {
                dv[k] = x1 * ti[0] * n_normal[k]; // E_i(x¹ N_k)
                for l in 0..n {
                    for j in 0..n {
                        dv[k] +=
                            hyperbolic_christoffel(x1, l, j, k) * (x1 * ti[l]) * (x1 * n_normal[j]);
                    }
                }
            }
            for (j, tj) in frame.iter().enumerate() {
                let ip: f64 = dv.iter().zip(tj).map(|(a, b)| a * b).sum();
                // b(dv, E_j) = (1/x¹²)·⟨dv, x¹ t_j⟩ = ⟨dv, t_j⟩/x¹
                s[(i, j)] = -ip / x1;
            }
        }
        let sym = (&s + s.transpose()) * 0.5;
        let eig = sym.symmetric_eigen();
        let mut kappas: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        kappas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for k in &kappas {
            worst = worst.max((k - target).abs());
        }
        curvatures.push(kappas);
    }
    Ok(UmbilicityReport {
        principal_curvatures: curvatures,
        max_deviation: worst,
    })
}
