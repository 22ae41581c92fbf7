//! Convex polytopes in the half-space, log-sum-exp smoothing of their
//! boundaries, the homotopic Gauss map and its trace norm, dihedral and
//! matching angles, the highest-point normal cone, and the two-metric
//! trace-norm comparison.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

// ---------------------------------------------------------------------------
// polytopes
// ---------------------------------------------------------------------------

/// Ω = ∩_ℓ {u_ℓ ≤ 0}, u_ℓ(x) = ⟨a_ℓ, x⟩ − b_ℓ with unit outward normals a_ℓ.
#[derive(Debug, Clone)]
pub struct ConvexPolytope {
    pub n: usize,
    pub facets: Vec<(Vec<f64>, f64)>,
    pub interior_point: Vec<f64>,
    /// all vertices (solutions of n active facets satisfying every constraint)
    pub vertices: Vec<Vec<f64>>,
    /// false only for the single-half-space special case
    pub bounded: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl ConvexPolytope {
    pub fn u(&self, ell: usize, x: &[f64]) -> f64 {
        dot(&self.facets[ell].0, x) - self.facets[ell].1
    }

    pub fn new(facets: Vec<(Vec<f64>, f64)>, interior_point: Vec<f64>) -> Result<Self> {
        let n = interior_point.len();
        if facets.is_empty() {
            return Err(Error::DegeneratePolytope("no facets".into()));
        }
        for (ell, (a, _)) in facets.iter().enumerate() {
            if a.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: a.len(),
                });
            }
            let norm = dot(a, a).sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::NonUnitVector(norm));
            }
            for (k, (a2, b2)) in facets.iter().enumerate().skip(ell + 1) {
                let d: f64 = a
                    .iter()
                    .zip(a2)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                if d < 1e-12 && (facets[ell].1 - b2).abs() < 1e-12 {
                    return Err(Error::DegeneratePolytope(format!(
                        "facets {ell} and {k} are duplicates"
                    )));
                }
            }
        }
        let poly = Self {
            n,
            facets,
            interior_point,
            vertices: Vec::new(),
            bounded: false,
        };
        for ell in 0..poly.facets.len() {
            if poly.u(ell, &poly.interior_point) >= 0.0 {
                return Err(Error::DegeneratePolytope(format!(
                    "interior point violates facet {ell}"
                )));
            }
        }
        if poly.facets.len() == 1 {
            // half-space special case: unbounded, trivially valid
            return Ok(Self {
                bounded: false,
                ..poly
            });
        }
        // vertex enumeration: every n-subset of facets with an invertible
        // normal matrix whose solution satisfies all constraints
        let l = poly.facets.len();
        let mut vertices: Vec<Vec<f64>> = Vec::new();
        for combo in combinations(l, n) {
            let a = DMatrix::<f64>::from_fn(n, n, |r, c| poly.facets[combo[r]].0[c]);
            let b = DVector::<f64>::from_fn(n, |r, _| poly.facets[combo[r]].1);
            let lu = a.lu();
            if let Some(x) = lu.solve(&b) {
                // guard against near-singular systems blowing up
                if x.iter().any(|v| !v.is_finite() || v.abs() > 1e12) {
                    continue;
                }
                let xv: Vec<f64> = x.iter().copied().collect();
                if (0..l).all(|ell| poly.u(ell, &xv) <= 1e-9)
                    && !vertices
                        .iter()
                        .any(|w| w.iter().zip(&xv).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) < 1e-9)
                {
                    vertices.push(xv);
                }
            }
        }
        if vertices.len() < n + 1 {
            return Err(Error::DegeneratePolytope(format!(
                "only {} vertices found",
                vertices.len()
            )));
        }
        // boundedness: the recession cone {d : a_ℓ·d ≤ 0 ∀ℓ} must be {0};
        // probed over axis and seeded random directions
        let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b97f4a7c15);
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for axis in 0..n {
            for s in [1.0, -1.0] {
                let mut d = vec![0.0; n];
                d[axis] = s;
                dirs.push(d);
            }
        }
        for _ in 0..512 {
            let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
            let norm = dot(&d, &d).sqrt();
            if norm > 1e-6 {
                dirs.push(d.iter().map(|x| x / norm).collect());
            }
        }
        for d in &dirs {
            let support = poly
                .facets
                .iter()
                .map(|(a, _)| dot(a, d))
                .fold(f64::NEG_INFINITY, f64::max);
            if support <= 1e-9 {
                return Err(Error::DegeneratePolytope(
                    "polytope is unbounded (nonzero recession direction)".into(),
                ));
            }
        }
        // facet activity: centroid of each facet's vertices lies strictly
        // inside the other half-spaces
        for ell in 0..l {
            let on: Vec<&Vec<f64>> = vertices
                .iter()
                .filter(|v| poly.u(ell, v).abs() < 1e-9)
                .collect();
            if on.len() < n {
                return Err(Error::DegeneratePolytope(format!(
                    "facet {ell} is inactive"
                )));
            }
            let centroid: Vec<f64> = (0..n)
                .map(|c| on.iter().map(|v| v[c]).sum::<f64>() / on.len() as f64)
                .collect();
            for k in 0..l {
                if k != ell && poly.u(k, &centroid) > -1e-9 {
                    return Err(Error::DegeneratePolytope(format!(
                        "facet {ell} has no relative interior against facet {k}"
                    )));
                }
            }
        }
        Ok(Self {
            vertices,
            bounded: true,
            ..poly
        })
    }

    /// Axis-aligned box as a polytope.
    pub fn axis_box(min: &[f64], max: &[f64]) -> Result<Self> {
        let n = min.len();
        let mut facets = Vec::with_capacity(2 * n);
        for axis in 0..n {
            let mut up = vec![0.0; n];
            up[axis] = 1.0;
            facets.push((up.clone(), max[axis]));
            let mut dn = vec![0.0; n];
            dn[axis] = -1.0;
            facets.push((dn, -min[axis]));
        }
        let center: Vec<f64> = min.iter().zip(max).map(|(a, b)| 0.5 * (a + b)).collect();
        Self::new(facets, center)
    }

    /// log F_λ(x) = logsumexp_ℓ(λ u_ℓ(x)); the smoothed boundary is its
    /// zero level set.
    pub fn log_f(&self, lambda: f64, x: &[f64]) -> f64 {
        let us: Vec<f64> = (0..self.facets.len()).map(|l| lambda * self.u(l, x)).collect();
        let mx = us.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        mx + us.iter().map(|u| (u - mx).exp()).sum::<f64>().ln()
    }

    /// Unnormalized gradient direction W = Σ e^{λu_ℓ − max} a_ℓ (∝ ∇F_λ).
    fn weighted_normal(&self, lambda: f64, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let us: Vec<f64> = (0..self.facets.len()).map(|l| lambda * self.u(l, x)).collect();
        let mx = us.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let ws: Vec<f64> = us.iter().map(|u| (u - mx).exp()).collect();
        let mut w = vec![0.0; self.n];
        for (wl, (a, _)) in ws.iter().zip(&self.facets) {
            for (wc, ac) in w.iter_mut().zip(a) {
                *wc += wl * ac;
            }
        }
        (w, ws)
    }
}

// ---------------------------------------------------------------------------
// smoothed boundary
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct BoundarySample {
    pub x: Vec<f64>,
    /// unit Euclidean normal N_λ = ∇F_λ/|∇F_λ|
    pub n_lambda: Vec<f64>,
    /// Euclidean-orthonormal tangent frame at x
    pub tangent: Vec<Vec<f64>>,
    /// dN_λ in the tangent frame (symmetric PSD for convex Ω_λ)
    pub dn: DMatrix<f64>,
    /// Euclidean mean curvature tr dN_λ
    pub h_delta: f64,
    /// |F_λ(x) − 1| from the root finder
    pub f_residual: f64,
    /// max_ℓ u_ℓ(x) (must lie in [−log|Λ|/λ, 0])
    pub max_u: f64,
    /// |∇F_λ(x)| after weight stabilization (nonvanishing)
    pub grad_norm: f64,
}

#[derive(Debug, Clone)]
pub struct SmoothedBoundary {
    pub lambda: f64,
    pub num_facets: usize,
    pub samples: Vec<BoundarySample>,
}

fn orthonormal_tangent(normal: &[f64]) -> Vec<Vec<f64>> {
    let n = normal.len();
    let mut frame: Vec<Vec<f64>> = Vec::new();
    for axis in 0..n {
        let mut v: Vec<f64> = (0..n).map(|i| (i == axis) as i32 as f64).collect();
        let pn = dot(&v, normal);
        for (vi, ni) in v.iter_mut().zip(normal) {
            *vi -= pn * ni;
        }
        for t in &frame {
            let pt = dot(&v, t);
            for (vi, ti) in v.iter_mut().zip(t) {
                *vi -= pt * ti;
            }
        }
        let norm = dot(&v, &v).sqrt();
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
    frame
}

fn sample_at(poly: &ConvexPolytope, lambda: f64, x: &[f64], f_residual: f64) -> BoundarySample {
    let n = poly.n;
    let (w, ws) = poly.weighted_normal(lambda, x);
    let grad_norm = dot(&w, &w).sqrt();
    let normal: Vec<f64> = w.iter().map(|c| c / grad_norm).collect();
    let tangent = orthonormal_tangent(&normal);
    // Hessian of F_λ (stabilized weights): Σ λ w_ℓ a_ℓ a_ℓᵀ; the shape
    // operator of the level set is P H P / |∇F| in the tangent frame
    let mut dn = DMatrix::<f64>::zeros(n - 1, n - 1);
    for (wl, (a, _)) in ws.iter().zip(&poly.facets) {
        if *wl < 1e-300 {
            continue;
        }
        let ta: Vec<f64> = tangent.iter().map(|t| dot(t, a)).collect();
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                dn[(i, j)] += lambda * wl * ta[i] * ta[j];
            }
        }
    }
    dn /= grad_norm;
    let h_delta = dn.trace();
    let max_u = (0..poly.facets.len())
        .map(|l| poly.u(l, x))
        .fold(f64::NEG_INFINITY, f64::max);
    BoundarySample {
        x: x.to_vec(),
        n_lambda: normal,
        tangent,
        dn,
        h_delta,
        f_residual,
        max_u,
        grad_norm,
    }
}

/// Root t of log F_λ(p + t·dir) = 0 by doubling bracket, bisection and a
/// Newton polish; |F − 1| < 1e−10 at the result.
fn ray_crossing(poly: &ConvexPolytope, lambda: f64, dir: &[f64]) -> Result<f64> {
    let p = &poly.interior_point;
    let at = |t: f64| -> Vec<f64> { p.iter().zip(dir).map(|(x, d)| x + t * d).collect() };
    let g = |t: f64| poly.log_f(lambda, &at(t));
    if g(0.0) >= 0.0 {
        return Err(Error::Domain(format!(
            "interior point outside Ω_λ; λ = {lambda} too small"
        )));
    }
    let mut hi = 1.0;
    let mut grow = 0;
    while g(hi) < 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(Error::Bracketing(
                "ray never crosses the smoothed boundary".into(),
            ));
        }
    }
    let mut lo = if grow == 0 { 0.0 } else { hi / 2.0 };
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    // Newton polish on log F: d/dt log F = ⟨W, dir⟩·λ / Σw  — recompute from
    // stabilized weights
    for _ in 0..4 {
        let x = at(t);
        let (w, ws) = poly.weighted_normal(lambda, &x);
        let denom: f64 = ws.iter().sum();
        let slope = lambda * dot(&w, dir) / denom;
        if slope.abs() < 1e-300 {
            break;
        }
        t -= g(t) / slope;
    }
    let res = (poly.log_f(lambda, &at(t))).exp() - 1.0;
    if res.abs() > 1e-10 {
        return Err(Error::Bracketing(format!(
            "root polish failed: |F−1| = {}",
            res.abs()
        )));
    }
    Ok(t)
}

/// Sample ∂Ω_λ along rays from the interior point.
pub fn boundary_sample(
    poly: &ConvexPolytope,
    lambda: f64,
    directions: &[Vec<f64>],
) -> Result<SmoothedBoundary> {
    if lambda <= 0.0 {
        return Err(Error::InvalidInput(format!("λ = {lambda} must be positive")));
    }
    let mut samples = Vec::with_capacity(directions.len());
    for dir in directions {
        let norm = dot(dir, dir).sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NonUnitVector(norm));
        }
        let t = ray_crossing(poly, lambda, dir)?;
        let x: Vec<f64> = poly
            .interior_point
            .iter()
            .zip(dir)
            .map(|(p, d)| p + t * d)
            .collect();
        let res = (poly.log_f(lambda, &x)).exp() - 1.0;
        samples.push(sample_at(poly, lambda, &x, res.abs()));
    }
    Ok(SmoothedBoundary {
        lambda,
        num_facets: poly.facets.len(),
        samples,
    })
}

/// Exact sphere boundary as a `SmoothedBoundary`-shaped oracle (bypasses
/// smoothing): N = (x−c)/R, dN = I/R, H_δ = (n−1)/R.
pub fn sphere_oracle(center: &[f64], radius: f64, directions: &[Vec<f64>]) -> Result<SmoothedBoundary> {
    if radius <= 0.0 {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    let n = center.len();
    let mut samples = Vec::with_capacity(directions.len());
    for dir in directions {
        let norm = dot(dir, dir).sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NonUnitVector(norm));
        }
        let x: Vec<f64> = center.iter().zip(dir).map(|(c, d)| c + radius * d).collect();
        let tangent = orthonormal_tangent(dir);
        let dn = DMatrix::<f64>::identity(n - 1, n - 1) / radius;
        samples.push(BoundarySample {
            x,
            n_lambda: dir.clone(),
            tangent,
            dn,
            h_delta: (n as f64 - 1.0) / radius,
            f_residual: 0.0,
            max_u: 0.0,
            grad_norm: 1.0,
        });
    }
    Ok(SmoothedBoundary {
        lambda: f64::INFINITY,
        num_facets: 1,
        samples,
    })
}

// ---------------------------------------------------------------------------
// trace norms of dN
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum BoundaryMetric {
    Euclidean,
    /// b = (x¹)⁻²δ restricted to the boundary; the target sphere keeps δ
    Hyperbolic,
    /// explicit source Gram matrix per sample, in the sample's tangent frame
    Custom(Vec<DMatrix<f64>>),
}

#[derive(Debug, Clone)]
pub struct TraceNormSample {
    pub q: Vec<f64>,
    pub trace_norm: f64,
}

/// Singular values of dN_λ : (T_x∂Ω, G) → (T𝕊ⁿ⁻¹, δ), i.e. of dN·G^{−1/2},
/// and their sum.
pub fn trace_norm_dn(sb: &SmoothedBoundary, metric: &BoundaryMetric) -> Result<Vec<TraceNormSample>> {
    let mut out = Vec::with_capacity(sb.samples.len());
    for (k, s) in sb.samples.iter().enumerate() {
        let dim = s.dn.nrows();
        let g_inv_sqrt: DMatrix<f64> = match metric {
            BoundaryMetric::Euclidean => DMatrix::identity(dim, dim),
            BoundaryMetric::Hyperbolic => {
                if s.x[0] <= 0.0 {
                    return Err(Error::Domain("sample outside the half-space".into()));
                }
                DMatrix::identity(dim, dim) * s.x[0]
            }
            BoundaryMetric::Custom(grams) => {
                let g = grams
                    .get(k)
                    .ok_or_else(|| Error::InvalidInput("missing Gram matrix".into()))?;
                let eig = g.clone().symmetric_eigen();
                if eig.eigenvalues.iter().any(|&e| e <= 0.0) {
                    return Err(Error::InvalidInput("Gram matrix not positive definite".into()));
                }
                let mut d = DMatrix::<f64>::zeros(dim, dim);
                for i in 0..dim {
                    d[(i, i)] = eig.eigenvalues[i].sqrt().recip();
                }
                &eig.eigenvectors * d * eig.eigenvectors.transpose()
            }
        };
        let m = &s.dn * g_inv_sqrt;
        let mut q: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
        q.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let trace_norm = q.iter().sum();
        out.push(TraceNormSample { q, trace_norm });
    }
    Ok(out)
}

/// Euclidean mean curvature per sample.
pub fn smoothed_mean_curvature(sb: &SmoothedBoundary) -> Vec<f64> {
    sb.samples.iter().map(|s| s.h_delta).collect()
}

/// H_b − (n−1)⟨∂_{x¹}, N_λ⟩ − ‖dN_λ‖_{tr,b} per sample, with
/// H_b = x¹H_δ + (n−1)⟨∂_{x¹}, N_λ⟩; equals x¹(H_δ − ‖dN_λ‖_{tr,δ}).
pub fn boundary_defect_hyperbolic(sb: &SmoothedBoundary) -> Result<Vec<f64>> {
    let tns = trace_norm_dn(sb, &BoundaryMetric::Hyperbolic)?;
    Ok(sb
        .samples
        .iter()
        .zip(&tns)
        .map(|(s, tn)| {
            let n = s.x.len() as f64;
            let x1 = s.x[0];
            let h_b = x1 * s.h_delta + (n - 1.0) * s.n_lambda[0];
            h_b - (n - 1.0) * s.n_lambda[0] - tn.trace_norm
        })
        .collect())
}

/// Smallest eigenvalue of the tangential Hessian of F_λ over all samples
/// (convexity of the sublevel set: must be ≥ −1e−10).
pub fn convexity_min_eigen(sb: &SmoothedBoundary) -> f64 {
    sb.samples
        .iter()
        .flat_map(|s| {
            let sym = (&s.dn + s.dn.transpose()) * 0.5;
            sym.symmetric_eigen().eigenvalues.iter().copied().collect::<Vec<_>>()
        })
        .fold(f64::INFINITY, f64::min)
}

// ---------------------------------------------------------------------------
// dihedral / matching angles
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct EdgeReport {
    pub facets: (usize, usize),
    /// Euclidean dihedral angle, cos γ̄ = −⟨N_i, N_j⟩
    pub gamma_bar: f64,
    /// max |g(ν_i,ν_j) − ⟨N_i,N_j⟩| over shared-face samples, when g given
    pub matching_residual: Option<f64>,
}

fn shared_face_vertices(poly: &ConvexPolytope, i: usize, j: usize) -> Vec<Vec<f64>> {
    poly.vertices
        .iter()
        .filter(|v| poly.u(i, v).abs() < 1e-9 && poly.u(j, v).abs() < 1e-9)
        .cloned()
        .collect()
}

fn affine_rank(points: &[Vec<f64>]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let n = points[0].len();
    let rows = points.len() - 1;
    let m = DMatrix::<f64>::from_fn(rows, n, |r, c| points[r + 1][c] - points[0][c]);
    m.svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-9)
        .count()
}

/// Whether facets i, j share an (n−2)-face with nonempty relative interior.
pub fn facets_adjacent(poly: &ConvexPolytope, i: usize, j: usize) -> bool {
    affine_rank(&shared_face_vertices(poly, i, j)) == poly.n - 2 && poly.n >= 2
}

/// Dihedral angle of a single adjacent facet pair, with the matching-angle
/// residual when a boundary metric g (coordinate Gram field) is supplied.
pub fn dihedral_for_pair(
    poly: &ConvexPolytope,
    i: usize,
    j: usize,
    g: Option<&dyn Fn(&[f64]) -> DMatrix<f64>>,
) -> Result<EdgeReport> {
    if i == j || i >= poly.facets.len() || j >= poly.facets.len() {
        return Err(Error::InvalidInput(format!("bad facet pair ({i}, {j})")));
    }
    if !facets_adjacent(poly, i, j) {
        return Err(Error::InvalidInput(format!(
            "facets {i} and {j} are not adjacent"
        )));
    }
    let ni = &poly.facets[i].0;
    let nj = &poly.facets[j].0;
    let cosg = -dot(ni, nj);
    let gamma_bar = cosg.clamp(-1.0, 1.0).acos();
    let matching_residual = match g {
        None => None,
        Some(metric) => {
            let shared = shared_face_vertices(poly, i, j);
            let mut pts: Vec<Vec<f64>> = shared.clone();
            // centroid gives a relative-interior witness
            let centroid: Vec<f64> = (0..poly.n)
                .map(|c| shared.iter().map(|v| v[c]).sum::<f64>() / shared.len() as f64)
                .collect();
            pts.push(centroid);
            let mut worst = 0.0f64;
            for x in &pts {
                let gm = metric(x);
                let ginv = gm
                    .clone()
                    .try_inverse()
                    .ok_or_else(|| Error::InvalidInput("singular metric".into()))?;
                let nu = |a: &[f64]| -> DVector<f64> {
                    let av = DVector::from_column_slice(a);
                    let raw = &ginv * av;
                    let norm = (raw.dot(&(&gm * &raw))).sqrt();
                    raw / norm
                };
                let vi = nu(ni);
                let vj = nu(nj);
                let pairing = vi.dot(&(&gm * vj));
                worst = worst.max((pairing - dot(ni, nj)).abs());
            }
            Some(worst)
        }
    };
    Ok(EdgeReport {
        facets: (i, j),
        gamma_bar,
        matching_residual,
    })
}

/// All adjacent facet pairs with their angles.
pub fn dihedral_and_matching(
    poly: &ConvexPolytope,
    g: Option<&dyn Fn(&[f64]) -> DMatrix<f64>>,
) -> Result<Vec<EdgeReport>> {
    let l = poly.facets.len();
    let mut out = Vec::new();
    for i in 0..l {
        for j in i + 1..l {
            if facets_adjacent(poly, i, j) {
                out.push(dihedral_for_pair(poly, i, j, g)?);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// highest point
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ConeReport {
    pub p0: Vec<f64>,
    pub active: Vec<usize>,
    /// least-squares coefficients in N₀ = Σ a_i N_i over the active normals
    pub coefficients: Vec<f64>,
    pub combination_residual: f64,
    /// |ν₀|_b for ν₀ = Σ a_i ν_i at p₀ (must be 1)
    pub nu0_b_norm: f64,
    /// active normal set is rank-deficient: coefficients are non-unique
    pub degenerate: bool,
}

pub fn highest_point_cone(poly: &ConvexPolytope) -> Result<ConeReport> {
    if !poly.bounded {
        return Err(Error::Domain("polytope unbounded in x¹".into()));
    }
    let top = poly
        .vertices
        .iter()
        .map(|v| v[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let top_vertices: Vec<&Vec<f64>> = poly
        .vertices
        .iter()
        .filter(|v| v[0] > top - 1e-9)
        .collect();
    let p0: Vec<f64> = (0..poly.n)
        .map(|c| top_vertices.iter().map(|v| v[c]).sum::<f64>() / top_vertices.len() as f64)
        .collect();
    let active: Vec<usize> = (0..poly.facets.len())
        .filter(|&l| poly.u(l, &p0).abs() < 1e-9)
        .collect();
    if active.is_empty() {
        return Err(Error::Inconsistent("no active facet at the highest point".into()));
    }
    // N₀ = e₁ = Σ a_i N_i by least squares over the active normals
    let k = active.len();
    let a = DMatrix::<f64>::from_fn(poly.n, k, |r, c| poly.facets[active[c]].0[r]);
    let mut n0 = DVector::<f64>::zeros(poly.n);
    n0[0] = 1.0;
    let svd = a.clone().svd(true, true);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-9)
        .count();
    let coeffs = svd
        .solve(&n0, 1e-12)
        .map_err(|e| Error::Inconsistent(e.to_string()))?;
    let recon = &a * &coeffs;
    let combination_residual = (recon.clone() - &n0).norm();
    // ν_i = x¹N_i are the b-unit normals; ν₀ = Σ a_i ν_i = x¹·(Σ a_i N_i),
    // so |ν₀|_b = |Σ a_i N_i|_δ
    let nu0_b_norm = recon.norm();
    Ok(ConeReport {
        p0,
        active,
        coefficients: coeffs.iter().copied().collect(),
        combination_residual,
        nu0_b_norm,
        degenerate: rank < k,
    })
}

// ---------------------------------------------------------------------------
// trace-norm comparison
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct TraceNormReport {
    /// Σ singular values of L (metric-1 trace norm)
    pub tn1: f64,
    /// Σ singular values of L·S with S = diag(μ_i^{−1/2}) (metric-2)
    pub tn2: f64,
    /// max over random orthogonal Q of tr(SQL)
    pub mc_max: f64,
    pub seed: u64,
}

/// Random orthogonal matrix: QR of a standard Gaussian with the R diagonal
/// sign-fixed, so the distribution is Haar and the result deterministic per
/// RNG state.
pub fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    // Box–Muller from uniform draws keeps the dependency surface small
    let mut gauss = || -> f64 {
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        (-2.0 * u1.ln()).sqrt() * u2.cos()
    };
    let a = DMatrix::<f64>::from_fn(n, n, |_, _| gauss());
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..n {
        if r[(c, c)] < 0.0 {
            for rix in 0..n {
                q[(rix, c)] = -q[(rix, c)];
            }
        }
    }
    q
}

/// Compare the two trace norms of an isomorphism L between a μ-weighted and
/// the standard inner product; checks mc_max ≤ tn2 ≤ tn1 internally.
pub fn trace_norm_comparison(
    l: &DMatrix<f64>,
    mu: &[f64],
    mc_samples: usize,
    seed: u64,
) -> Result<TraceNormReport> {
    let n = l.nrows();
    if l.ncols() != n || mu.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: l.ncols().max(mu.len()),
        });
    }
    if mu.iter().any(|&m| m < 1.0 - 1e-12) {
        return Err(Error::InvalidInput("all μ_i must be ≥ 1".into()));
    }
    let sv1 = l.clone().svd(false, false).singular_values;
    if sv1.iter().any(|&s| s < 1e-12) {
        return Err(Error::InvalidInput("L must be a linear isomorphism".into()));
    }
    let tn1: f64 = sv1.iter().sum();
    let s = DMatrix::<f64>::from_fn(n, n, |r, c| {
        if r == c {
            mu[r].sqrt().recip()
        } else {
            0.0
        }
    });
    let ls = l * &s;
    let tn2: f64 = ls.clone().svd(false, false).singular_values.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mc_max = f64::NEG_INFINITY;
    for _ in 0..mc_samples {
        let q = random_orthogonal(n, &mut rng);
        // tr(SQL) = tr(Q·L·S)
        let val = (&q * &ls).trace();
        mc_max = mc_max.max(val);
    }
    if mc_max > tn2 + 1e-9 || tn2 > tn1 + 1e-9 {
        return Err(Error::Inconsistent(format!(
            "trace-norm ordering violated: mc {mc_max}, tn2 {tn2}, tn1 {tn1}"
        )));
    }
    Ok(TraceNormReport {
        tn1,
        tn2,
        mc_max,
        seed,
    })
}

// ---------------------------------------------------------------------------
// smoothing convergence
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub lambda: f64,
    /// two-sided ray estimate of d_H(∂Ω_λ, ∂Ω)
    pub hausdorff: f64,
    /// max |N_λ − N_facet| at facet-interior witness points
    pub normal_deviation: f64,
}

/// Exact crossing of ∂Ω along a ray from the interior point.
fn polytope_ray_crossing(poly: &ConvexPolytope, dir: &[f64]) -> Option<f64> {
    let p = &poly.interior_point;
    let mut t_min = f64::INFINITY;
    for (a, b) in &poly.facets {
        let ad = dot(a, dir);
        if ad > 1e-12 {
            let t = (b - dot(a, p)) / ad;
            t_min = t_min.min(t);
        }
    }
    t_min.is_finite().then_some(t_min)
}

pub fn smoothing_convergence(
    poly: &ConvexPolytope,
    lambdas: &[f64],
    sample_budget: usize,
    seed: u64,
) -> Result<Vec<ConvergenceRow>> {
    if lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("λ list must be increasing".into()));
    }
    // deterministic direction set: axes plus seeded random unit vectors
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for axis in 0..poly.n {
        for s in [1.0, -1.0] {
            let mut d = vec![0.0; poly.n];
            d[axis] = s;
            dirs.push(d);
        }
    }
    while dirs.len() < sample_budget.max(2 * poly.n) {
        let d: Vec<f64> = (0..poly.n).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
        let norm = dot(&d, &d).sqrt();
        if norm > 1e-6 {
            dirs.push(d.iter().map(|x| x / norm).collect());
        }
    }
    // facet-interior witness directions (toward each facet's vertex centroid)
    let mut witness: Vec<(usize, Vec<f64>)> = Vec::new();
    if poly.bounded {
        for l in 0..poly.facets.len() {
            let on: Vec<&Vec<f64>> = poly
                .vertices
                .iter()
                .filter(|v| poly.u(l, v).abs() < 1e-9)
                .collect();
            if on.is_empty() {
                continue;
            }
            let centroid: Vec<f64> = (0..poly.n)
                .map(|c| on.iter().map(|v| v[c]).sum::<f64>() / on.len() as f64)
                .collect();
            let d: Vec<f64> = centroid
                .iter()
                .zip(&poly.interior_point)
                .map(|(c, p)| c - p)
                .collect();
            let norm = dot(&d, &d).sqrt();
            if norm > 1e-9 {
                witness.push((l, d.iter().map(|x| x / norm).collect()));
            }
        }
    }
    let mut out = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mut dh = 0.0f64;
        for d in &dirs {
            let Some(t_poly) = polytope_ray_crossing(poly, d) else {
                continue;
            };
            let t_l = ray_crossing(poly, lambda, d)?;
            dh = dh.max((t_poly - t_l).abs());
        }
        let mut nd = 0.0f64;
        for (l, d) in &witness {
            let t = ray_crossing(poly, lambda, d)?;
            let x: Vec<f64> = poly
                .interior_point
                .iter()
                .zip(d)
                .map(|(p, di)| p + t * di)
                .collect();
            let s = sample_at(poly, lambda, &x, 0.0);
            let dev: f64 = s
                .n_lambda
                .iter()
                .zip(&poly.facets[*l].0)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            nd = nd.max(dev);
        }
        out.push(ConvergenceRow {
            lambda,
            hausdorff: dh,
            normal_deviation: nd,
        });
    }
    Ok(out)
}
