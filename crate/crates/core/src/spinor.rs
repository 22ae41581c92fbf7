//! m-tuples of spinors on sampled half-space domains: Killing transport,
//! type classification, Gram identities, boundary conditions and the
//! curvature-reconstruction residual.
//!
//! Throughout, the upper half-space carries b = (x¹)⁻²δ with the conformal
//! orthonormal frame e_i = x¹∂_i, and spinor fields are written in a basis
//! diagonalizing ω_{N₀} for the distinguished direction N₀ = ∂_{x¹}: the
//! first m/2 tuple columns have ω-eigenvalue +1, the rest −1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::{build_clifford_rep, diagonalize_omega, omega_matrix_raw, CliffordRep};
use crate::curvature::{riemann_frame_conformal, StencilOrder};
use crate::grid::{Face, GridDomain};
use crate::linalg::{eye, max_abs, CMat, CVec, C64, I};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// representation plumbing
// ---------------------------------------------------------------------------

/// Representation conjugated so that ω_{N₀} (N₀ = first axis) is diagonal,
/// +1 block first, together with the per-column eigenvalue pattern.
pub fn standard_diagonal_rep(n: usize) -> Result<(CliffordRep, Vec<f64>)> {
    let rep = build_clifford_rep(n)?;
    let mut n0 = vec![0.0; n];
    n0[0] = 1.0;
    let u = diagonalize_omega(&rep, &n0)?;
    let rep = rep.conjugated(&u);
    let m = rep.m;
    let signs: Vec<f64> = (0..m).map(|a| if a < m / 2 { 1.0 } else { -1.0 }).collect();
    Ok((rep, signs))
}

/// ω_{N₀} as a diagonal sign vector turned into a matrix.
fn omega_diag(rep: &CliffordRep, signs: &[f64]) -> CMat {
    let mut d = CMat::zeros(rep.m, rep.m);
    for (a, &s) in signs.iter().enumerate() {
        d[(a, a)] = C64::new(s, 0.0);
    }
    d
}

/// Generator K_ξ of the Killing equation ∇_{e_ξ} s_α = ζ_α K_ξ s_α:
/// ½ ε γ_ξ for even n, −(√−1/2) γ_ξ for odd n.
pub fn killing_generator(rep: &CliffordRep, xi: usize) -> CMat {
    let g = &rep.gammas[xi];
    match &rep.grading {
        Some(eps) => (eps * g).map(|z| 0.5 * z),
        None => g.map(|z| -0.5 * I * z),
    }
}

/// Hermitian involution family W_ξ = 2 K_ξ (ε γ_ξ / −√−1 γ_ξ); W(u)² = 1
/// for unit u. These drive the algebraic gradient and the type-I witness.
fn involution(rep: &CliffordRep, u: &[f64]) -> Result<CMat> {
    let g = rep.gamma(u)?;
    Ok(match &rep.grading {
        Some(eps) => eps * &g,
        None => g.map(|z| -I * z),
    })
}

// ---------------------------------------------------------------------------
// spin connection
// ---------------------------------------------------------------------------

/// Spin connection coefficient A_ξ of a conformal metric e^{2f}δ in its
/// orthonormal frame e_i = e^{−f}∂_i: A_ξ = ½ e^{−f} Σ_{j≠ξ} (∂_j f) γ_j γ_ξ.
pub fn conformal_spin_connection(
    rep: &CliffordRep,
    grad_f: &[f64],
    inv_conf: f64,
    xi: usize,
) -> Result<CMat> {
    if grad_f.len() != rep.n {
        return Err(Error::DimensionMismatch {
            expected: rep.n,
            got: grad_f.len(),
        });
    }
    if xi >= rep.n {
        return Err(Error::InvalidInput(format!("frame index {xi} out of range")));
    }
    let mut a = CMat::zeros(rep.m, rep.m);
    for j in 0..rep.n {
        if j == xi || grad_f[j] == 0.0 {
            continue;
        }
        let w = C64::new(0.5 * inv_conf * grad_f[j], 0.0);
        a += (&rep.gammas[j] * &rep.gammas[xi]).map(|z| w * z);
    }
    Ok(a)
}

/// Spin connection of b = (x¹)⁻²δ in the frame e_i = x¹∂_i:
/// A_1 = 0 and A_ξ = −½ γ_1 γ_ξ otherwise. Skew-Hermitian.
pub fn hyperbolic_spin_connection(rep: &CliffordRep, x: &[f64], xi: usize) -> Result<CMat> {
    if x.len() != rep.n {
        return Err(Error::DimensionMismatch {
            expected: rep.n,
            got: x.len(),
        });
    }
    if x[0] <= 0.0 {
        return Err(Error::Domain(format!(
            "point outside the half-space: x¹ = {}",
            x[0]
        )));
    }
    let mut grad_f = vec![0.0; rep.n];
    grad_f[0] = -1.0 / x[0]; // f = −log x¹
    conformal_spin_connection(rep, &grad_f, x[0], xi)
}

// ---------------------------------------------------------------------------
// transport
// ---------------------------------------------------------------------------

/// Coordinate-derivative matrix of the Killing system along velocity u at p:
/// ds/dt = B s with B = Σ_j u_j (ζ K_j − A_j(p)) / p¹.
fn transport_rhs(rep: &CliffordRep, sign: f64, p: &[f64], u: &[f64]) -> Result<CMat> {
    if p[0] <= 0.0 {
        return Err(Error::Domain(format!(
            "transport path left the half-space: x¹ = {}",
            p[0]
        )));
    }
    let mut b = CMat::zeros(rep.m, rep.m);
    for j in 0..rep.n {
        if u[j] == 0.0 {
            continue;
        }
        let kj = killing_generator(rep, j).map(|z| C64::new(sign, 0.0) * z);
        let aj = hyperbolic_spin_connection(rep, p, j)?;
        b += (kj - aj).map(|z| C64::new(u[j] / p[0], 0.0) * z);
    }
    Ok(b)
}

/// Integrate the Killing equation for a single spinor along a polyline with
/// a classical 4-stage one-step method, `steps` steps per segment.
pub fn killing_transport(
    rep: &CliffordRep,
    sign: f64,
    s0: &CVec,
    path: &[Vec<f64>],
    steps: usize,
) -> Result<CVec> {
    if path.len() < 2 {
        return Err(Error::InvalidInput("path needs at least two vertices".into()));
    }
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be ≥ 1".into()));
    }
    let mut s = s0.clone();
    for w in path.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let u: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        let dt = 1.0 / steps as f64;
        for k in 0..steps {
            let t0 = k as f64 * dt;
            let at = |t: f64| -> Vec<f64> {
                a.iter().zip(&u).map(|(x, du)| x + t * du).collect()
            };
            let k1 = transport_rhs(rep, sign, &at(t0), &u)? * &s;
            let k2 = transport_rhs(rep, sign, &at(t0 + 0.5 * dt), &u)?
                * (&s + k1.map(|z| C64::new(0.5 * dt, 0.0) * z));
            let k3 = transport_rhs(rep, sign, &at(t0 + 0.5 * dt), &u)?
                * (&s + k2.map(|z| C64::new(0.5 * dt, 0.0) * z));
            let k4 = transport_rhs(rep, sign, &at(t0 + dt), &u)?
                * (&s + k3.map(|z| C64::new(dt, 0.0) * z));
            s += (k1 + k2.map(|z| 2.0 * z) + k3.map(|z| 2.0 * z) + k4)
                .map(|z| C64::new(dt / 6.0, 0.0) * z);
        }
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// fields
// ---------------------------------------------------------------------------

/// An m-tuple field: one m×m matrix per grid node, column α = s_α, written
/// in the ω_{N₀}-diagonal basis with the sign split recorded in `signs`.
#[derive(Debug, Clone)]
pub struct SpinorMTuple {
    pub rep: CliffordRep,
    pub domain: GridDomain,
    pub signs: Vec<f64>,
    pub data: Vec<CMat>,
    /// seed node of the transport (initial data lives here)
    pub base: Vec<usize>,
}

impl SpinorMTuple {
    pub fn at(&self, idx: &[usize]) -> &CMat {
        &self.data[self.domain.ravel(idx)]
    }

    pub fn column(&self, idx: &[usize], alpha: usize) -> CVec {
        self.at(idx).column(alpha).into_owned()
    }

    /// Frame derivative ∇-free part x¹ ∂_axis S by central differences;
    /// requires an interior node along `axis`.
    pub fn frame_derivative(&self, idx: &[usize], axis: usize) -> CMat {
        let mut up = idx.to_vec();
        let mut dn = idx.to_vec();
        up[axis] += 1;
        dn[axis] -= 1;
        let x1 = self.domain.point(idx)[0];
        (self.at(&up) - self.at(&dn)).map(|z| C64::new(x1 / (2.0 * self.domain.h), 0.0) * z)
    }
}

/// RK4 step of the full matrix system dS/dt = (K_j S D ζ − A_j S)/x¹ along
/// coordinate axis `axis` with signed length `dt`, substepped.
fn step_matrix(
    rep: &CliffordRep,
    dzeta: &CMat,
    from: &[f64],
    axis: usize,
    dt: f64,
    substeps: usize,
    s: &CMat,
) -> Result<CMat> {
    let kj = killing_generator(rep, axis);
    let rhs = |p: &[f64], m: &CMat| -> Result<CMat> {
        if p[0] <= 0.0 {
            return Err(Error::Domain("left the half-space during transport".into()));
        }
        let aj = hyperbolic_spin_connection(rep, p, axis)?;
        Ok((&kj * m * dzeta - aj * m).map(|z| C64::new(1.0 / p[0], 0.0) * z))
    };
    let h = dt / substeps as f64;
    let mut s = s.clone();
    let mut p = from.to_vec();
    for _ in 0..substeps {
        let mut pm = p.clone();
        pm[axis] += 0.5 * h;
        let mut pe = p.clone();
        pe[axis] += h;
        let k1 = rhs(&p, &s)?;
        let k2 = rhs(&pm, &(&s + k1.map(|z| C64::new(0.5 * h, 0.0) * z)))?;
        let k3 = rhs(&pm, &(&s + k2.map(|z| C64::new(0.5 * h, 0.0) * z)))?;
        let k4 = rhs(&pe, &(&s + k3.map(|z| C64::new(h, 0.0) * z)))?;
        s += (k1 + k2.map(|z| 2.0 * z) + k3.map(|z| 2.0 * z) + k4)
            .map(|z| C64::new(h / 6.0, 0.0) * z);
        p[axis] += h;
    }
    Ok(s)
}

/// Transport arbitrary initial data from a base node across the whole grid:
/// axis 0 line first, then sweeps along each further axis.
pub fn build_killing_basis_with(
    rep: &CliffordRep,
    signs: &[f64],
    domain: &GridDomain,
    base: &[usize],
    initial: &CMat,
) -> Result<SpinorMTuple> {
    if rep.n != domain.n {
        return Err(Error::DimensionMismatch {
            expected: rep.n,
            got: domain.n,
        });
    }
    if base.len() != domain.n || base.iter().zip(&domain.dims).any(|(&b, &d)| b >= d) {
        return Err(Error::InvalidInput("base node outside the grid".into()));
    }
    let dzeta = omega_diag(rep, signs);
    let substeps = 4;
    let mut data: Vec<Option<CMat>> = vec![None; domain.num_points()];
    data[domain.ravel(base)] = Some(initial.clone());
    for axis in 0..domain.n {
        // nodes already filled: differ from base only on axes < axis
        let seeds: Vec<Vec<usize>> = domain
            .indices()
            .filter(|idx| {
                data[domain.ravel(idx)].is_some() && idx[axis] == base[axis]
            })
            .collect();
        for seed in seeds {
            for dir in [1isize, -1isize] {
                let mut idx = seed.clone();
                let mut s = data[domain.ravel(&seed)].clone().unwrap();
                loop {
                    let next = idx[axis] as isize + dir;
                    if next < 0 || next as usize >= domain.dims[axis] {
                        break;
                    }
                    let from = domain.point(&idx);
                    s = step_matrix(
                        rep,
                        &dzeta,
                        &from,
                        axis,
                        dir as f64 * domain.h,
                        substeps,
                        &s,
                    )?;
                    idx[axis] = next as usize;
                    data[domain.ravel(&idx)] = Some(s.clone());
                }
            }
        }
    }
    Ok(SpinorMTuple {
        rep: rep.clone(),
        domain: domain.clone(),
        signs: signs.to_vec(),
        data: data.into_iter().map(|o| o.expect("grid fill is exhaustive")).collect(),
        base: base.to_vec(),
    })
}

/// Killing basis with the standard basis of ℂ^m as initial data at `base`.
pub fn build_killing_basis(
    rep: &CliffordRep,
    signs: &[f64],
    domain: &GridDomain,
    base: &[usize],
) -> Result<SpinorMTuple> {
    build_killing_basis_with(rep, signs, domain, base, &eye(rep.m))
}

/// Max over interior nodes and frame directions of the central-difference
/// Killing residual ‖x¹∂_j S + A_j S − K_j S Dζ‖.
pub fn killing_residual(field: &SpinorMTuple) -> f64 {
    let rep = &field.rep;
    let dzeta = omega_diag(rep, &field.signs);
    let mut worst = 0.0f64;
    for idx in field.domain.indices() {
        if !field.domain.is_interior(&idx) {
            continue;
        }
        let x = field.domain.point(&idx);
        let s = field.at(&idx);
        for j in 0..rep.n {
            let d = field.frame_derivative(&idx, j);
            let aj = hyperbolic_spin_connection(rep, &x, j).expect("interior point");
            let kj = killing_generator(rep, j);
            worst = worst.max(max_abs(&(d + aj * s - kj * s * &dzeta)));
        }
    }
    worst
}

/// Smallest singular value of the m×m tuple over all nodes (linear
/// independence of the components).
pub fn min_singular_value(field: &SpinorMTuple) -> f64 {
    field
        .data
        .iter()
        .map(|s| {
            s.clone()
                .svd(false, false)
                .singular_values
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

// ---------------------------------------------------------------------------
// V profile and type classification
// ---------------------------------------------------------------------------

/// Algebraic frame gradient of V = |s_α|²: ∇_{e_i}V = ζ_α Re⟨W_i s, s⟩,
/// exact at grid nodes up to transport error.
pub fn algebraic_gradient(field: &SpinorMTuple, idx: &[usize], alpha: usize) -> Vec<f64> {
    let rep = &field.rep;
    let s = field.column(idx, alpha);
    let zeta = field.signs[alpha];
    (0..rep.n)
        .map(|i| {
            let mut u = vec![0.0; rep.n];
            u[i] = 1.0;
            let w = involution(rep, &u).expect("unit frame vector");
            zeta * (s.dotc(&(w * &s))).re
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct VProfile {
    /// V = |s_α|² per node (ravel order)
    pub v: Vec<f64>,
    /// c = V² − |∇V|²_b per node with the algebraic gradient
    pub c_algebraic: Vec<f64>,
    /// c with the central-difference gradient, (ravel id, value), interior only
    pub c_discrete: Vec<(usize, f64)>,
    pub v_min: f64,
    pub c_algebraic_mean: f64,
    pub c_algebraic_stddev: f64,
    pub c_discrete_mean: f64,
    pub c_discrete_stddev: f64,
}

fn mean_stddev(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
    (mean, var.sqrt())
}

pub fn v_profile(field: &SpinorMTuple, alpha: usize) -> Result<VProfile> {
    if alpha >= field.rep.m {
        return Err(Error::InvalidInput(format!("column index {alpha} out of range")));
    }
    let dom = &field.domain;
    let mut v = Vec::with_capacity(dom.num_points());
    let mut c_alg = Vec::with_capacity(dom.num_points());
    let mut c_disc = Vec::new();
    for idx in dom.indices() {
        let s = field.column(&idx, alpha);
        let val = s.dotc(&s).re;
        v.push(val);
        let g = algebraic_gradient(field, &idx, alpha);
        c_alg.push(val * val - g.iter().map(|x| x * x).sum::<f64>());
    }
    for idx in dom.indices() {
        if !dom.is_interior(&idx) {
            continue;
        }
        let r = dom.ravel(&idx);
        let x1 = dom.point(&idx)[0];
        let mut gsq = 0.0;
        for a in 0..dom.n {
            let mut up = idx.clone();
            let mut dn = idx.clone();
            up[a] += 1;
            dn[a] -= 1;
            let d = x1 * (v[dom.ravel(&up)] - v[dom.ravel(&dn)]) / (2.0 * dom.h);
            gsq += d * d;
        }
        c_disc.push((r, v[r] * v[r] - gsq));
    }
    let v_min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let (am, asd) = mean_stddev(&c_alg);
    let dvals: Vec<f64> = c_disc.iter().map(|&(_, c)| c).collect();
    let (dm, dsd) = mean_stddev(&dvals);
    Ok(VProfile {
        v,
        c_algebraic: c_alg,
        c_discrete: c_disc,
        v_min,
        c_algebraic_mean: am,
        c_algebraic_stddev: asd,
        c_discrete_mean: dm,
        c_discrete_stddev: dsd,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpinorType {
    TypeI,
    TypeII,
    Indeterminate,
}

#[derive(Debug, Clone)]
pub struct TypeReport {
    pub class: SpinorType,
    /// the classifying constant V² − |∇V|² (spatial mean, algebraic gradient)
    pub c: f64,
    pub tolerance: f64,
    /// unit witness direction when type I
    pub witness: Option<Vec<f64>>,
    /// max ‖W(ν₀)s ∓ s‖/‖s‖ over nodes for the better eigen-sign
    pub witness_residual: f64,
    /// the matching eigenvalue of W(ν₀)
    pub eigen_sign: f64,
}

/// Classify s_α by the constant c = V² − |∇V|²; when c ≈ 0 recover the unit
/// witness ν₀ = ±∇log V and verify the pointwise eigen-equation.
pub fn classify_type(field: &SpinorMTuple, alpha: usize) -> Result<TypeReport> {
    let prof = v_profile(field, alpha)?;
    if prof.v.iter().all(|&v| v < 1e-14) {
        return Err(Error::InvalidInput("identically vanishing spinor".into()));
    }
    let tol = 1e-6f64.max(10.0 * killing_residual(field));
    let c = prof.c_algebraic_mean;
    if c.abs() > 10.0 * tol {
        return Ok(TypeReport {
            class: SpinorType::TypeII,
            c,
            tolerance: tol,
            witness: None,
            witness_residual: f64::INFINITY,
            eigen_sign: 0.0,
        });
    }
    if c.abs() > tol {
        return Ok(TypeReport {
            class: SpinorType::Indeterminate,
            c,
            tolerance: tol,
            witness: None,
            witness_residual: f64::INFINITY,
            eigen_sign: 0.0,
        });
    }
    // witness field ν₀(x) = ±∇log V from the algebraic gradient; it is a
    // genuine vector field (constant in frame components only for vertical
    // horosphere foliations), so the eigen-equation is checked pointwise
    // and the reported witness is its value at the seed node
    let dom = &field.domain;
    let witness_at = |idx: &[usize]| -> Result<Vec<f64>> {
        let g = algebraic_gradient(field, idx, alpha);
        let norm: f64 = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::Inconsistent(
                "type-I candidate with vanishing gradient of V".into(),
            ));
        }
        Ok(g.iter().map(|x| x / norm).collect())
    };
    let nu0 = witness_at(&field.base)?;
    let mut res_plus = 0.0f64;
    let mut res_minus = 0.0f64;
    for idx in dom.indices() {
        let s = field.column(&idx, alpha);
        let nrm = s.norm();
        if nrm < 1e-14 {
            continue;
        }
        let w = involution(&field.rep, &witness_at(&idx)?)?;
        let ws = &w * &s;
        res_plus = res_plus.max((&ws - &s).norm() / nrm);
        res_minus = res_minus.max((&ws + &s).norm() / nrm);
    }
    let (eigen_sign, witness_residual) = if res_plus <= res_minus {
        (1.0, res_plus)
    } else {
        (-1.0, res_minus)
    };
    Ok(TypeReport {
        class: SpinorType::TypeI,
        c,
        tolerance: tol,
        witness: Some(nu0),
        witness_residual,
        eigen_sign,
    })
}

/// Unit-norm eigenvector of W(ν₀) = ε c(ν₀) (resp. −√−1 c(ν₀)) with
/// eigenvalue `sign`; initial data for a type-I field.
pub fn type_one_initial(rep: &CliffordRep, nu0: &[f64], sign: f64) -> Result<CVec> {
    let nn: f64 = nu0.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (nn - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitVector(nn));
    }
    let w = involution(rep, nu0)?;
    let proj = (eye(rep.m) + w.map(|z| C64::new(sign, 0.0) * z)).map(|z| 0.5 * z);
    // projector has rank m/2; pick the best-conditioned basis image
    let mut best: Option<CVec> = None;
    for k in 0..rep.m {
        let v: CVec = proj.column(k).into_owned();
        if best.as_ref().map_or(true, |b| v.norm() > b.norm()) {
            best = Some(v);
        }
    }
    let v = best.unwrap();
    if v.norm() < 1e-12 {
        return Err(Error::Inconsistent("eigenprojector is zero".into()));
    }
    Ok(v.map(|z| z / C64::new(v.norm(), 0.0)))
}

/// Orthonormal frame of the hyperplane orthogonal to `nu` (frame indices).
fn tangent_frame(n: usize, nu: &[f64]) -> Vec<Vec<f64>> {
    let mut tangent: Vec<Vec<f64>> = Vec::new();
    for axis in 0..n {
        let mut v: Vec<f64> = (0..n).map(|i| (i == axis) as i32 as f64).collect();
        let pn: f64 = v.iter().zip(nu).map(|(a, b)| a * b).sum();
        for (vi, ni) in v.iter_mut().zip(nu) {
            *vi -= pn * ni;
        }
        for t in &tangent {
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
            tangent.push(v);
        }
        if tangent.len() == n - 1 {
            break;
        }
    }
    tangent
}

/// Residual of parallelism of a type-I s_α along the level sets of V: with
/// the pointwise witness ν₀(x) = ∇log V, for frame directions X ⟂ ν₀,
/// min over the two normal orientations of max ‖∇_X s ± ½ c(X) c(ν₀) s‖.
pub fn tangential_parallel_residual(field: &SpinorMTuple, alpha: usize) -> Result<f64> {
    let rep = &field.rep;
    let dom = &field.domain;
    let mut worst_plus = 0.0f64;
    let mut worst_minus = 0.0f64;
    for idx in dom.indices() {
        if !dom.is_interior(&idx) {
            continue;
        }
        let x = dom.point(&idx);
        let s = field.column(&idx, alpha);
        let g = algebraic_gradient(field, &idx, alpha);
        let gn: f64 = g.iter().map(|a| a * a).sum::<f64>().sqrt();
        if gn < 1e-12 {
            return Err(Error::Inconsistent(
                "vanishing gradient of V at an interior node".into(),
            ));
        }
        let nu0: Vec<f64> = g.iter().map(|a| a / gn).collect();
        let gnu = rep.gamma(&nu0)?;
        for t in &tangent_frame(rep.n, &nu0) {
            // ∇_X s = Σ_i X_i (x¹∂_i + A_i) s, central differences
            let mut ds = CVec::zeros(rep.m);
            for i in 0..rep.n {
                if t[i] == 0.0 {
                    continue;
                }
                let mut up = idx.clone();
                let mut dn = idx.clone();
                up[i] += 1;
                dn[i] -= 1;
                let d = (field.column(&up, alpha) - field.column(&dn, alpha))
                    .map(|z| C64::new(x[0] * t[i] / (2.0 * dom.h), 0.0) * z);
                let a = hyperbolic_spin_connection(rep, &x, i)?;
                ds += d + (a * &s).map(|z| C64::new(t[i], 0.0) * z);
            }
            let half = (rep.gamma(t)? * &gnu * &s).map(|z| 0.5 * z);
            worst_plus = worst_plus.max((&ds + &half).norm());
            worst_minus = worst_minus.max((&ds - &half).norm());
        }
    }
    Ok(worst_plus.min(worst_minus))
}

// ---------------------------------------------------------------------------
// Gram identities
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GramReport {
    /// max over nodes of ‖G − (tr G/m) I‖
    pub max_scalar_deviation: f64,
    /// max over nodes of |G_{αβ}|, α ≠ β
    pub max_off_diagonal: f64,
    /// max frame-gradient norm of ⟨s_α,s_β⟩ over opposite-sign pairs
    pub opposite_pair_max_gradient: f64,
    /// max frame-gradient norm over all off-diagonal pairs; the diagonal
    /// entries V_α are excluded since they genuinely vary (Hess V = V·b)
    pub off_diagonal_max_gradient: f64,
}

pub fn gram_identity_check(field: &SpinorMTuple) -> GramReport {
    let dom = &field.domain;
    let m = field.rep.m;
    // Gram field G = S† S per node
    let grams: Vec<CMat> = field.data.iter().map(|s| s.adjoint() * s).collect();
    let mut max_dev = 0.0f64;
    let mut max_off = 0.0f64;
    for g in &grams {
        let tr = g.trace() / C64::new(m as f64, 0.0);
        let dev = g - eye(m).map(|z| tr * z);
        max_dev = max_dev.max(max_abs(&dev));
        for a in 0..m {
            for b in 0..m {
                if a != b {
                    max_off = max_off.max(g[(a, b)].norm());
                }
            }
        }
    }
    let mut opp_grad = 0.0f64;
    let mut all_grad = 0.0f64;
    for idx in dom.indices() {
        if !dom.is_interior(&idx) {
            continue;
        }
        let x1 = dom.point(&idx)[0];
        for axis in 0..dom.n {
            let mut up = idx.clone();
            let mut dn = idx.clone();
            up[axis] += 1;
            dn[axis] -= 1;
            let d = (&grams[dom.ravel(&up)] - &grams[dom.ravel(&dn)])
                .map(|z| C64::new(x1 / (2.0 * dom.h), 0.0) * z);
            for a in 0..m {
                for b in 0..m {
                    if a == b {
                        continue;
                    }
                    let g = d[(a, b)].norm();
                    all_grad = all_grad.max(g);
                    if field.signs[a] * field.signs[b] < 0.0 {
                        opp_grad = opp_grad.max(g);
                    }
                }
            }
        }
    }
    GramReport {
        max_scalar_deviation: max_dev,
        max_off_diagonal: max_off,
        opposite_pair_max_gradient: opp_grad,
        off_diagonal_max_gradient: all_grad,
    }
}

// ---------------------------------------------------------------------------
// boundary condition
// ---------------------------------------------------------------------------

/// χ applied to a tuple: ε c(ν) S ω_Nᵀ (even) resp. √−1 c(ν) S ω_Nᵀ (odd),
/// with c(ν) = γ(N) for the b-unit normal ν = x¹N in the conformal frame.
pub fn chi_apply(rep: &CliffordRep, n_euclid: &[f64], s: &CMat) -> Result<CMat> {
    let nn: f64 = n_euclid.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (nn - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitVector(nn));
    }
    let omega = omega_matrix_raw(rep, n_euclid)?;
    let g = rep.gamma(n_euclid)?;
    Ok(match &rep.grading {
        Some(eps) => eps * g * s * omega.transpose(),
        None => (g * s * omega.transpose()).map(|z| I * z),
    })
}

/// Max over face samples of ‖χ(S) + S‖/‖S‖ (even: εc(ν)ω_N s = −s) resp.
/// ‖χ(S) − S‖/‖S‖ (odd: ω_N √−1 c(ν) s = s).
pub fn boundary_condition_residual(
    field: &SpinorMTuple,
    n_euclid: &[f64],
    face_nodes: &[Vec<usize>],
) -> Result<f64> {
    if n_euclid.len() != field.rep.n {
        return Err(Error::DimensionMismatch {
            expected: field.rep.n,
            got: n_euclid.len(),
        });
    }
    let target_sign = if field.rep.grading.is_some() { 1.0 } else { -1.0 };
    let mut worst = 0.0f64;
    for idx in face_nodes {
        let s = field.at(idx);
        let chi = chi_apply(&field.rep, n_euclid, s)?;
        let res = max_abs(&(chi + s.map(|z| C64::new(target_sign, 0.0) * z)));
        let scale = max_abs(s).max(1e-300);
        worst = worst.max(res / scale);
    }
    Ok(worst)
}

/// Full-rank initial data in the boundary-condition eigenspace of χ for a
/// face with Euclidean unit normal N: seeded random projection, retried
/// until the smallest singular value is healthy.
pub fn boundary_adapted_initial(rep: &CliffordRep, n_euclid: &[f64], seed: u64) -> Result<CMat> {
    let sign = if rep.grading.is_some() { -1.0 } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let mut r = CMat::zeros(rep.m, rep.m);
        for z in r.iter_mut() {
            *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let chi = chi_apply(rep, n_euclid, &r)?;
        // project onto {S : χ(S) = sign·S}
        let s0 = (r + chi.map(|z| C64::new(sign, 0.0) * z)).map(|z| 0.5 * z);
        let svals = s0.clone().svd(false, false).singular_values;
        let smin = svals.iter().copied().fold(f64::INFINITY, f64::min);
        let smax = svals.iter().copied().fold(0.0f64, f64::max);
        if smax > 0.0 && smin / smax > 1e-3 {
            return Ok(s0.map(|z| z / C64::new(smax, 0.0)));
        }
    }
    Err(Error::Inconsistent(
        "no full-rank boundary-adapted tuple found in the χ eigenspace".into(),
    ))
}

// ---------------------------------------------------------------------------
// Hessian identity
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct HessianReport {
    /// max ‖Hess f − f·g‖ over deep-interior nodes (frame components)
    pub interior: f64,
    /// max |∇_ν f − ⟨N₀,N⟩ f| over the face
    pub boundary_plus: f64,
    /// max |∇_ν f + ⟨N₀,N⟩ f| over the face
    pub boundary_minus: f64,
}

/// f = ⟨⟨c₁,s⟩, ⟨c₂,s⟩⟩ with ⟨c,s⟩ = Σ c̄_α s_α; checks Hess f = f·b in the
/// interior and the signed normal-derivative identities on one face.
pub fn hessian_identity_residual(
    field: &SpinorMTuple,
    c1: &CVec,
    c2: &CVec,
    face: Face,
) -> Result<HessianReport> {
    let dom = &field.domain;
    let m = field.rep.m;
    if c1.len() != m || c2.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: c1.len().max(c2.len()),
        });
    }
    // scalar field f per node
    let f: Vec<C64> = field
        .data
        .iter()
        .map(|s| {
            let u = s * c1.map(|z| z.conj());
            let w = s * c2.map(|z| z.conj());
            u.dotc(&w) // Σ conj(u_k) w_k
        })
        .collect();
    let n = dom.n;
    let h = dom.h;
    // first frame derivatives D_j f = x¹ ∂_j f at interior nodes
    let deriv = |r: usize, axis: usize, values: &dyn Fn(usize) -> C64| -> C64 {
        let idx = dom.unravel(r);
        let mut up = idx.clone();
        let mut dn = idx.clone();
        up[axis] += 1;
        dn[axis] -= 1;
        let x1 = dom.point(&idx)[0];
        (values(dom.ravel(&up)) - values(dom.ravel(&dn))) * C64::new(x1 / (2.0 * h), 0.0)
    };
    let mut dfields: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); dom.num_points()]; n];
    for idx in dom.indices() {
        if !dom.is_interior(&idx) {
            continue;
        }
        let r = dom.ravel(&idx);
        for j in 0..n {
            dfields[j][r] = deriv(r, j, &|q| f[q]);
        }
    }
    let mut interior = 0.0f64;
    for idx in dom.indices() {
        // need a 2-ring for the nested stencil
        if idx.iter().zip(&dom.dims).any(|(&i, &d)| i < 2 || i + 2 >= d) {
            continue;
        }
        let r = dom.ravel(&idx);
        for i in 0..n {
            for j in 0..n {
                // Hess_{ij} f = e_i(e_j f) + δ_{j,0} e_i f − δ_{ij} e_0 f
                let mut hess = deriv(r, i, &|q| dfields[j][q]);
                if j == 0 {
                    hess += dfields[i][r];
                }
                if i == j {
                    hess -= dfields[0][r];
                }
                let want = if i == j { f[r] } else { C64::new(0.0, 0.0) };
                interior = interior.max((hess - want).norm());
            }
        }
    }
    // boundary: ∇_ν f along the inward normal of the chosen face
    let inward: Vec<f64> = dom.outward_normal(face).iter().map(|x| -x).collect();
    let n0_dot_n = inward[0];
    let mut bp = 0.0f64;
    let mut bm = 0.0f64;
    for idx in dom.face_indices(face) {
        let r = dom.ravel(&idx);
        let x1 = dom.point(&idx)[0];
        // one-sided second-order derivative into the domain
        let mut i1 = idx.clone();
        let mut i2 = idx.clone();
        if face.upper {
            i1[face.axis] -= 1;
            i2[face.axis] -= 2;
        } else {
            i1[face.axis] += 1;
            i2[face.axis] += 2;
        }
        let df = (f[dom.ravel(&i1)] * C64::new(4.0, 0.0)
            - f[dom.ravel(&i2)]
            - f[r] * C64::new(3.0, 0.0))
            * C64::new(x1 / (2.0 * h), 0.0);
        let term = f[r] * C64::new(n0_dot_n, 0.0);
        bp = bp.max((df - term).norm());
        bm = bm.max((df + term).norm());
    }
    Ok(HessianReport {
        interior,
        boundary_plus: bp,
        boundary_minus: bm,
    })
}

// ---------------------------------------------------------------------------
// curvature reconstruction
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    /// b = (x¹)⁻²δ
    Hyperbolic,
    /// conformal factor (1 + 0.01 sin x²)/x¹ — negative control
    PerturbedConformal,
}

/// Evaluate Σ_{ij}(R_{ijkl} + δ_{ik}δ_{jl} − δ_{il}δ_{jk}) c(e_i)c(e_j)s_μ
/// with R from the finite-difference oracle in the conformal frame; max norm
/// over k, l, μ and a few interior sample nodes. For odd n the result is
/// projected by ½(1 + Γ) first.
pub fn curvature_reconstruction_residual(
    field: &SpinorMTuple,
    metric: MetricKind,
    max_samples: usize,
) -> Result<f64> {
    let rep = &field.rep;
    let dom = &field.domain;
    let n = rep.n;
    let psi = |x: &[f64]| -> f64 {
        match metric {
            MetricKind::Hyperbolic => 1.0 / x[0],
            MetricKind::PerturbedConformal => (1.0 + 0.01 * x[1].sin()) / x[0],
        }
    };
    let interior: Vec<Vec<usize>> = dom
        .indices()
        .filter(|idx| dom.is_interior(idx))
        .collect();
    if interior.is_empty() {
        return Err(Error::InvalidInput("grid has no interior nodes".into()));
    }
    let stride = (interior.len() / max_samples.max(1)).max(1);
    let proj = rep.volume.as_ref().map(|g| (eye(rep.m) + g).map(|z| 0.5 * z));
    let mut worst = 0.0f64;
    for idx in interior.iter().step_by(stride).take(max_samples.max(1)) {
        let x = dom.point(idx);
        let riem = riemann_frame_conformal(&psi, &x, 1e-3, StencilOrder::Fourth);
        let s = field.at(idx);
        for k in 0..n {
            for l in 0..n {
                let mut mat = CMat::zeros(rep.m, rep.m);
                for i in 0..n {
                    for j in 0..n {
                        let t = riem[i][j][(k, l)]
                            + ((i == k) as i32 * (j == l) as i32
                                - (i == l) as i32 * (j == k) as i32)
                                as f64;
                        if t != 0.0 {
                            mat += (&rep.gammas[i] * &rep.gammas[j])
                                .map(|z| C64::new(t, 0.0) * z);
                        }
                    }
                }
                if let Some(p) = &proj {
                    mat = p * mat;
                }
                for mu in 0..rep.m {
                    let col: CVec = s.column(mu).into_owned();
                    worst = worst.max((&mat * col).norm());
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, ONE};

    fn small_domain(h: f64) -> GridDomain {
        GridDomain::new(vec![1.0, 0.0, 0.0], vec![1.25, 0.25, 0.25], h).unwrap()
    }

    #[test]
    fn spin_connection_metricity_and_flat_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3usize, 4] {
            let (rep, _) = standard_diagonal_rep(n).unwrap();
            for _ in 0..200 {
                let x: Vec<f64> = (0..n)
                    .map(|i| if i == 0 { rng.gen_range(0.1..3.0) } else { rng.gen_range(-2.0..2.0) })
                    .collect();
                for xi in 0..n {
                    let a = hyperbolic_spin_connection(&rep, &x, xi).unwrap();
                    assert!(max_abs_diff(&a, &(-a.adjoint())) < 1e-12, "not skew-Hermitian");
                }
            }
            // A_1 = 0 and the flat limit
            let a0 = hyperbolic_spin_connection(&rep, &[1.3, 0.0, 0.0, 0.0][..n], 0).unwrap();
            assert!(max_abs(&a0) < 1e-15);
            let flat = conformal_spin_connection(&rep, &vec![0.0; n], 1.0, 1).unwrap();
            assert!(max_abs(&flat) == 0.0);
            assert!(hyperbolic_spin_connection(&rep, &vec![0.0; n], 1).is_err());
        }
    }

    #[test]
    fn transport_holonomy_and_path_independence() {
        let (rep, _) = standard_diagonal_rep(3).unwrap();
        let p0 = vec![1.5, 0.3, 0.2];
        let mut s0 = CVec::zeros(rep.m);
        s0[0] = ONE;
        s0[1] = C64::new(0.3, -0.4);
        for sign in [1.0, -1.0] {
            // closed square, side 0.1, in the (x¹, x²) plane
            let square = vec![
                p0.clone(),
                vec![1.6, 0.3, 0.2],
                vec![1.6, 0.4, 0.2],
                vec![1.5, 0.4, 0.2],
                p0.clone(),
            ];
            let back = killing_transport(&rep, sign, &s0, &square, 50).unwrap();
            assert!((back - &s0).norm() < 1e-8, "holonomy too large");
            // two paths with the same endpoints
            let q = vec![1.7, 0.45, 0.2];
            let path_a = vec![p0.clone(), vec![1.7, 0.3, 0.2], q.clone()];
            let path_b = vec![p0.clone(), vec![1.5, 0.45, 0.2], q.clone()];
            let ra = killing_transport(&rep, sign, &s0, &path_a, 60).unwrap();
            let rb = killing_transport(&rep, sign, &s0, &path_b, 60).unwrap();
            assert!((ra - rb).norm() < 1e-8, "path dependence detected");
        }
        // zero initial data stays zero
        let z = CVec::zeros(rep.m);
        let path = vec![p0.clone(), vec![1.9, 0.1, 0.4]];
        let r = killing_transport(&rep, 1.0, &z, &path, 10).unwrap();
        assert!(r.norm() == 0.0);
        // leaving the half-space is an error
        let bad = vec![p0, vec![-0.5, 0.3, 0.2]];
        assert!(killing_transport(&rep, 1.0, &s0, &bad, 10).is_err());
    }

    #[test]
    fn killing_basis_residual_second_order() {
        let (rep, signs) = standard_diagonal_rep(3).unwrap();
        let mut residuals = Vec::new();
        for h in [0.25 / 8.0, 0.25 / 16.0] {
            let dom = small_domain(h);
            let base = vec![0usize; 3];
            let field = build_killing_basis(&rep, &signs, &dom, &base).unwrap();
            residuals.push(killing_residual(&field));
        }
        let ratio = residuals[1] / residuals[0];
        assert!(
            (0.2..=0.35).contains(&ratio),
            "residuals {residuals:?}, ratio {ratio}"
        );
    }

    #[test]
    fn killing_basis_gram_and_independence() {
        let (rep, signs) = standard_diagonal_rep(3).unwrap();
        let dom = small_domain(0.25 / 8.0);
        let base = vec![0usize; 3];
        let field = build_killing_basis(&rep, &signs, &dom, &base).unwrap();
        // Gram at the base node is the identity
        let g0 = field.at(&base).adjoint() * field.at(&base);
        assert!(max_abs_diff(&g0, &eye(rep.m)) < 1e-12);
        assert!(min_singular_value(&field) > 0.1);
        let rep_g = gram_identity_check(&field);
        let kres = killing_residual(&field);
        assert!(rep_g.max_off_diagonal < 1e-6, "off-diag {}", rep_g.max_off_diagonal);
        assert!(
            rep_g.off_diagonal_max_gradient < 10.0 * kres,
            "gram gradient {} vs residual {}",
            rep_g.off_diagonal_max_gradient,
            kres
        );
        assert!(rep_g.opposite_pair_max_gradient <= rep_g.off_diagonal_max_gradient);
    }

    #[test]
    fn v_profile_type_one_and_scaling() {
        let (rep, signs) = standard_diagonal_rep(3).unwrap();
        let dom = small_domain(0.25 / 8.0);
        let base = vec![0usize; 3];
        let nu0 = {
            let raw = [1.0, 1.0, 0.0];
            let n: f64 = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            raw.iter().map(|x| x / n).collect::<Vec<_>>()
        };
        let v0 = type_one_initial(&rep, &nu0, 1.0).unwrap();
        let mut init = eye(rep.m);
        init.set_column(0, &v0);
        let field = build_killing_basis_with(&rep, &signs, &dom, &base, &init).unwrap();
        let prof = v_profile(&field, 0).unwrap();
        let cmax = prof
            .c_algebraic
            .iter()
            .fold(0.0f64, |acc, c| acc.max(c.abs()));
        assert!(cmax < 1e-6, "type-I constant {cmax}");
        assert!(prof.v_min > 0.0);
        // quadratic homogeneity: double the initial spinor, c scales by 4
        let mut init2 = init.clone();
        init2.set_column(0, &v0.map(|z| 2.0 * z));
        let field2 = build_killing_basis_with(&rep, &signs, &dom, &base, &init2).unwrap();
        let prof2 = v_profile(&field2, 0).unwrap();
        let generic = build_killing_basis(&rep, &signs, &dom, &base).unwrap();
        let _ = generic;
        for (c4, c1) in prof2.c_algebraic.iter().zip(&prof.c_algebraic) {
            assert!((c4 - 4.0 * c1).abs() < 1e-9);
        }
    }

    #[test]
    fn v_profile_discrete_convergence() {
        let (rep, signs) = standard_diagonal_rep(3).unwrap();
        let base = vec![0usize; 3];
        let mut sds = Vec::new();
        for h in [0.25 / 8.0, 0.25 / 16.0] {
            let dom = small_domain(h);
            let field = build_killing_basis(&rep, &signs, &dom, &base).unwrap();
            let prof = v_profile(&field, 0).unwrap();
            sds.push(prof.c_discrete_stddev);
        }
        let ratio = sds[1] / sds[0];
        assert!((0.15..=0.4).contains(&ratio), "stddevs {sds:?}, ratio {ratio}");
    }

    #[test]
    fn classify_recovers_witness_and_flags_generic() {
        let (rep, signs) = standard_diagonal_rep(3).unwrap();
        let dom = small_domain(0.25 / 8.0);
        let base = vec![0usize; 3];
        let nu0 = {
            let raw = [0.6, 0.0, 0.8];
            raw.to_vec()
        };
        let v0 = type_one_initial(&rep, &nu0, 1.0).unwrap();
        let mut init = eye(rep.m);
        init.set_column(0, &v0);
        let field = build_killing_basis_with(&rep, &signs, &dom, &base, &init).unwrap();
        let rpt = classify_type(&field, 0).unwrap();
        assert_eq!(rpt.class, SpinorType::TypeI);
        let w = rpt.witness.unwrap();
        let err: f64 = w
            .iter()
            .zip(&nu0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "witness {w:?} vs {nu0:?}");
        assert!(rpt.witness_residual < 1e-6);
        assert!(rpt.eigen_sign == 1.0);
        // tangential parallelism along the level sets of V
        let tres = tangential_parallel_residual(&field, 0).unwrap();
        assert!(tres < 5e-3, "tangential residual {tres}");
        // a generic initial spinor is type II; n = 4 here, since for n = 3
        // (m = 2) the Bloch identity Σ⟨W_i s,s⟩² = |s|⁴ makes c ≡ 0 and
        // every Killing spinor is type I
        let (rep4, signs4) = standard_diagonal_rep(4).unwrap();
        let dom4 = GridDomain::new(
            vec![1.0, 0.0, 0.0, 0.0],
            vec![1.25, 0.25, 0.25, 0.125],
            0.25 / 8.0,
        )
        .unwrap();
        let mut g = eye(rep4.m);
        g[(0, 0)] = C64::new(0.8, 0.1);
        g[(1, 0)] = C64::new(-0.3, 0.55);
        g[(3, 0)] = C64::new(0.2, 0.4);
        let field_g =
            build_killing_basis_with(&rep4, &signs4, &dom4, &vec![0usize; 4], &g).unwrap();
        let rpt_g = classify_type(&field_g, 0).unwrap();
        assert_eq!(rpt_g.class, SpinorType::TypeII);
        assert!(rpt_g.c > 0.0);
        // identically zero column is rejected
        let mut z = eye(rep.m);
        z.set_column(0, &CVec::zeros(rep.m));
        let field_z = build_killing_basis_with(&rep, &signs, &dom, &base, &z).unwrap();
        assert!(classify_type(&field_z, 0).is_err());
    }

    #[test]
    fn boundary_condition_propagates_on_faces() {
        let (rep, signs) = standard_diagonal_rep(4).unwrap();
        let dom = GridDomain::new(
            vec![1.0, 0.0, 0.0, 0.0],
            vec![1.25, 0.25, 0.25, 0.125],
            0.25 / 8.0,
        )
        .unwrap();
        // vertical face x² = 0 with outward normal −e₂
        let face = Face { axis: 1, upper: false };
        let n_out = dom.outward_normal(face);
        let init = boundary_adapted_initial(&rep, &n_out, 11).unwrap();
        let chi = chi_apply(&rep, &n_out, &init).unwrap();
        assert!(max_abs_diff(&chi, &init.map(|z| -z)) < 1e-12);
        let base = vec![0usize; 4];
        let field = build_killing_basis_with(&rep, &signs, &dom, &base, &init).unwrap();
        let res = boundary_condition_residual(&field, &n_out, &dom.face_indices(face)).unwrap();
        assert!(res < 1e-6, "vertical-face residual {res}");
        // horizontal face x¹ = min with outward normal −e₁
        let bottom = Face { axis: 0, upper: false };
        let n_b = dom.outward_normal(bottom);
        let init_b = boundary_adapted_initial(&rep, &n_b, 5).unwrap();
        let field_b = build_killing_basis_with(&rep, &signs, &dom, &base, &init_b).unwrap();
        let res_b =
            boundary_condition_residual(&field_b, &n_b, &dom.face_indices(bottom)).unwrap();
        assert!(res_b < 1e-6, "horizontal-face residual {res_b}");
        // negative control: the identity violates the condition
        let field_id = build_killing_basis(&rep, &signs, &dom, &base).unwrap();
        let res_id =
            boundary_condition_residual(&field_id, &n_b, &dom.face_indices(bottom)).unwrap();
        assert!(res_id > 0.5, "expected O(1) violation, got {res_id}");
        // χ is an involution
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let raw: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let nn: f64 = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nvec: Vec<f64> = raw.iter().map(|x| x / nn).collect();
            let mut s = CMat::zeros(rep.m, rep.m);
            for z in s.iter_mut() {
                *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            let twice = chi_apply(&rep, &nvec, &chi_apply(&rep, &nvec, &s).unwrap()).unwrap();
            assert!(max_abs_diff(&twice, &s) < 1e-12);
        }
    }

    #[test]
    fn omega_exchange_identity() {
        // ω_N (1 ± ω_{N₀}) = (1 ∓ ω_{N₀}) ω_N ± 2⟨N,N₀⟩
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for n in [3usize, 4] {
            let (rep, signs) = standard_diagonal_rep(n).unwrap();
            let om0 = omega_diag(&rep, &signs);
            for _ in 0..100 {
                let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let nn: f64 = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
                let nvec: Vec<f64> = raw.iter().map(|x| x / nn).collect();
                let om = omega_matrix_raw(&rep, &nvec).unwrap();
                let dot = nvec[0];
                for pm in [1.0, -1.0] {
                    let lhs = &om * (eye(rep.m) + om0.map(|z| C64::new(pm, 0.0) * z));
                    let rhs = (eye(rep.m) - om0.map(|z| C64::new(pm, 0.0) * z)) * &om
                        + eye(rep.m).map(|z| C64::new(pm * 2.0 * dot, 0.0) * z);
                    assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn hessian_identity_residuals() {
        let (rep, signs) = standard_diagonal_rep(3).unwrap();
        let base = vec![0usize; 3];
        let mut interiors = Vec::new();
        for h in [0.25 / 8.0, 0.25 / 16.0] {
            let dom = small_domain(h);
            let field = build_killing_basis(&rep, &signs, &dom, &base).unwrap();
            let mut c1 = CVec::zeros(rep.m);
            c1[0] = ONE;
            let rpt = hessian_identity_residual(
                &field,
                &c1,
                &c1,
                Face { axis: 0, upper: false },
            )
            .unwrap();
            interiors.push(rpt.interior);
            // the two signed boundary residuals must disagree: exactly one
            // matches; record that the better one is small
            let best = rpt.boundary_plus.min(rpt.boundary_minus);
            let worse = rpt.boundary_plus.max(rpt.boundary_minus);
            assert!(best < 0.02 * worse.max(1e-6), "best {best}, worse {worse}");
        }
        let ratio = interiors[1] / interiors[0];
        assert!(
            (0.15..=0.4).contains(&ratio),
            "interior residuals {interiors:?}"
        );
        // orthogonal c1, c2 with opposite ω-signs: f ≡ 0
        let dom = small_domain(0.25 / 8.0);
        let field = build_killing_basis(&rep, &signs, &dom, &base).unwrap();
        let mut c1 = CVec::zeros(rep.m);
        c1[0] = ONE; // + block
        let mut c2 = CVec::zeros(rep.m);
        c2[rep.m - 1] = ONE; // − block
        let rpt = hessian_identity_residual(&field, &c1, &c2, Face { axis: 0, upper: false })
            .unwrap();
        assert!(rpt.interior < 1e-7, "cross-sign interior {}", rpt.interior);
        assert!(rpt.boundary_plus < 1e-7 && rpt.boundary_minus < 1e-7);
        // linearity in c1: scaling c1 scales the residual identically
        let rpt1 = hessian_identity_residual(&field, &c1, &c1, Face { axis: 0, upper: false })
            .unwrap();
        let c1s = c1.map(|z| C64::new(3.0, 0.0) * z);
        let rpt3 = hessian_identity_residual(&field, &c1s, &c1, Face { axis: 0, upper: false })
            .unwrap();
        assert!((rpt3.interior - 3.0 * rpt1.interior).abs() < 1e-9 * (1.0 + rpt1.interior));
    }

    #[test]
    fn curvature_reconstruction_even_and_odd() {
        // even n = 4: hyperbolic passes, perturbation is caught
        let (rep4, signs4) = standard_diagonal_rep(4).unwrap();
        let dom4 = GridDomain::new(
            vec![1.0, 0.0, 0.0, 0.0],
            vec![1.25, 0.25, 0.25, 0.125],
            0.25 / 4.0,
        )
        .unwrap();
        let base = vec![0usize; 4];
        let field4 = build_killing_basis(&rep4, &signs4, &dom4, &base).unwrap();
        let hyp = curvature_reconstruction_residual(&field4, MetricKind::Hyperbolic, 3).unwrap();
        assert!(hyp < 1e-6, "hyperbolic residual {hyp}");
        let pert =
            curvature_reconstruction_residual(&field4, MetricKind::PerturbedConformal, 3).unwrap();
        assert!(pert > 1e-3, "perturbed residual {pert}");
        // odd n = 3 with the ½(1 + Γ) projection
        let (rep3, signs3) = standard_diagonal_rep(3).unwrap();
        let dom3 = small_domain(0.25 / 4.0);
        let field3 = build_killing_basis(&rep3, &signs3, &dom3, &vec![0usize; 3]).unwrap();
        let hyp3 = curvature_reconstruction_residual(&field3, MetricKind::Hyperbolic, 3).unwrap();
        assert!(hyp3 < 1e-6, "odd hyperbolic residual {hyp3}");
    }
}
