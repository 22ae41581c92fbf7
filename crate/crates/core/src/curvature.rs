//! Finite-difference curvature oracles.
//!
//! Christoffel symbols, the Riemann tensor, and scalar curvature are
//! assembled from central-difference derivatives of an arbitrary coordinate
//! metric field. These routines are deliberately independent of the
//! closed-form curvature formulas elsewhere in the crate so they can serve
//! as oracles for them.
//!
//! Conventions: Γ^k_{ij} = ½ g^{kl}(∂_i g_{lj} + ∂_j g_{li} − ∂_l g_{ij}),
//! R^ρ_{σμν} = ∂_μ Γ^ρ_{νσ} − ∂_ν Γ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ},
//! Ric_{σν} = R^ρ_{σρν}, R = g^{σν} Ric_{σν}. With these signs a round
//! sphere has positive scalar curvature and a constant-curvature-K space
//! satisfies R_{ρσμν} = K (g_{ρμ} g_{σν} − g_{ρν} g_{σμ}).

use nalgebra::DMatrix;

/// Central-difference stencil order for first derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilOrder {
    Second,
    Fourth,
}

fn shifted(x: &[f64], axis: usize, delta: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[axis] += delta;
    y
}

/// First derivative of a matrix-valued function along one axis.
fn d_matrix<F>(f: &F, x: &[f64], axis: usize, h: f64, order: StencilOrder) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> DMatrix<f64>,
{
    match order {
        StencilOrder::Second => {
            let fp = f(&shifted(x, axis, h));
            let fm = f(&shifted(x, axis, -h));
            (fp - fm) / (2.0 * h)
        }
        StencilOrder::Fourth => {
            let f2p = f(&shifted(x, axis, 2.0 * h));
            let fp = f(&shifted(x, axis, h));
            let fm = f(&shifted(x, axis, -h));
            let f2m = f(&shifted(x, axis, -2.0 * h));
            (-f2p + fp * 8.0 - fm * 8.0 + f2m) / (12.0 * h)
        }
    }
}

/// Christoffel symbols Γ^k_{ij} at x; index order `[k][i][j]`.
pub fn christoffel<F>(g: &F, x: &[f64], h: f64, order: StencilOrder) -> Vec<DMatrix<f64>>
where
    F: Fn(&[f64]) -> DMatrix<f64>,
{
    let n = x.len();
    let ginv = g(x)
        .try_inverse()
        .expect("metric must be invertible at the evaluation point");
    let dg: Vec<DMatrix<f64>> = (0..n).map(|a| d_matrix(g, x, a, h, order)).collect();
    let mut gam = vec![DMatrix::<f64>::zeros(n, n); n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += ginv[(k, l)] * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]);
                }
                gam[k][(i, j)] = 0.5 * acc;
            }
        }
    }
    gam
}

/// Riemann tensor with all indices lowered, R_{ρσμν}; index order `[ρ][σ][μ][ν]`.
pub fn riemann_lower<F>(g: &F, x: &[f64], h: f64, order: StencilOrder) -> Vec<Vec<DMatrix<f64>>>
where
    F: Fn(&[f64]) -> DMatrix<f64>,
{
    let n = x.len();
    let gx = g(x);
    let gam = christoffel(g, x, h, order);
    // ∂_μ Γ^ρ_{νσ} via nested stencils (Christoffels at shifted points)
    let dgam: Vec<Vec<DMatrix<f64>>> = (0..n)
        .map(|mu| {
            let gam_at = |y: &[f64]| christoffel(g, y, h, order);
            match order {
                StencilOrder::Second => {
                    let gp = gam_at(&shifted(x, mu, h));
                    let gm = gam_at(&shifted(x, mu, -h));
                    (0..n)
                        .map(|r| (&gp[r] - &gm[r]) / (2.0 * h))
                        .collect::<Vec<_>>()
                }
                StencilOrder::Fourth => {
                    let g2p = gam_at(&shifted(x, mu, 2.0 * h));
                    let gp = gam_at(&shifted(x, mu, h));
                    let gm = gam_at(&shifted(x, mu, -h));
                    let g2m = gam_at(&shifted(x, mu, -2.0 * h));
                    (0..n)
                        .map(|r| (-&g2p[r] + &gp[r] * 8.0 - &gm[r] * 8.0 + &g2m[r]) / (12.0 * h))
                        .collect::<Vec<_>>()
                }
            }
        })
        .collect();
    // R^ρ_{σμν}
    let mut upper = vec![vec![DMatrix::<f64>::zeros(n, n); n]; n];
    for rho in 0..n {
        for sig in 0..n {
            for mu in 0..n {
                for nu in 0..n {
                    let mut val = dgam[mu][rho][(nu, sig)] - dgam[nu][rho][(mu, sig)];
                    for lam in 0..n {
                        val += gam[rho][(mu, lam)] * gam[lam][(nu, sig)]
                            - gam[rho][(nu, lam)] * gam[lam][(mu, sig)];
                    }
                    upper[rho][sig][(mu, nu)] = val;
                }
            }
        }
    }
    // lower first index
    let mut lower = vec![vec![DMatrix::<f64>::zeros(n, n); n]; n];
    for rho in 0..n {
        for sig in 0..n {
            for mu in 0..n {
                for nu in 0..n {
                    let mut val = 0.0;
                    for lam in 0..n {
                        val += gx[(rho, lam)] * upper[lam][sig][(mu, nu)];
                    }
                    lower[rho][sig][(mu, nu)] = val;
                }
            }
        }
    }
    lower
}

/// Scalar curvature at x by finite differences of the metric field.
pub fn scalar_curvature_fd<F>(g: &F, x: &[f64], h: f64, order: StencilOrder) -> f64
where
    F: Fn(&[f64]) -> DMatrix<f64>,
{
    let n = x.len();
    let gx = g(x);
    let ginv = gx.try_inverse().expect("metric must be invertible");
    let lower = riemann_lower(g, x, h, order);
    // R = g^{ρμ} g^{σν} R_{ρσμν}
    let mut r = 0.0;
    for rho in 0..n {
        for sig in 0..n {
            for mu in 0..n {
                for nu in 0..n {
                    r += ginv[(rho, mu)] * ginv[(sig, nu)] * lower[rho][sig][(mu, nu)];
                }
            }
        }
    }
    r
}

/// Conformal metric g = ψ(x)² δ as a coordinate metric field.
pub fn conformal_metric<P>(n: usize, psi: P) -> impl Fn(&[f64]) -> DMatrix<f64>
where
    P: Fn(&[f64]) -> f64,
{
    move |x: &[f64]| {
        let p = psi(x);
        DMatrix::identity(n, n) * (p * p)
    }
}

/// Riemann tensor of a conformal metric g = ψ²δ in its orthonormal frame
/// e_i = ψ⁻¹ ∂_i: frame components are ψ⁻⁴ · coordinate components.
pub fn riemann_frame_conformal<P>(
    psi: &P,
    x: &[f64],
    h: f64,
    order: StencilOrder,
) -> Vec<Vec<DMatrix<f64>>>
where
    P: Fn(&[f64]) -> f64,
{
    let n = x.len();
    let g = conformal_metric(n, |y: &[f64]| psi(y));
    let mut lower = riemann_lower(&g, x, h, order);
    let scale = psi(x).powi(4).recip();
    for block in lower.iter_mut() {
        for mat in block.iter_mut() {
            *mat *= scale;
        }
    }
    lower
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hyperbolic(n: usize) -> impl Fn(&[f64]) -> DMatrix<f64> {
        conformal_metric(n, |x: &[f64]| 1.0 / x[0])
    }

    #[test]
    fn flat_metric_zero_curvature() {
        let g = |_: &[f64]| DMatrix::<f64>::identity(3, 3);
        let r = scalar_curvature_fd(&g, &[0.3, 0.1, -0.2], 1e-3, StencilOrder::Second);
        assert!(r.abs() < 1e-9, "flat scalar curvature {r}");
    }

    #[test]
    fn round_sphere_scalar_curvature() {
        // unit 2-sphere, polar coordinates (θ, φ): g = diag(1, sin²θ); R = 2
        let g = |x: &[f64]| {
            let mut m = DMatrix::<f64>::identity(2, 2);
            m[(1, 1)] = x[0].sin().powi(2);
            m
        };
        let r = scalar_curvature_fd(&g, &[1.1, 0.4], 1e-3, StencilOrder::Fourth);
        assert!((r - 2.0).abs() < 1e-8, "sphere R = {r}");
    }

    #[test]
    fn hyperbolic_scalar_curvature() {
        for n in [3usize, 4] {
            let g = hyperbolic(n);
            let mut x = vec![0.3; n];
            x[0] = 2.0;
            let r = scalar_curvature_fd(&g, &x, 1e-3, StencilOrder::Fourth);
            let want = -((n * (n - 1)) as f64);
            assert!((r - want).abs() < 1e-6, "n = {n}, R = {r}");
        }
    }

    #[test]
    fn hyperbolic_frame_riemann_constant_curvature() {
        let n = 3;
        let psi = |x: &[f64]| 1.0 / x[0];
        let x = [1.7, 0.2, -0.4];
        let fr = riemann_frame_conformal(&psi, &x, 1e-3, StencilOrder::Fourth);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let want = -(((i == k) as i32 * (j == l) as i32
                            - (i == l) as i32 * (j == k) as i32)
                            as f64);
                        worst = worst.max((fr[i][j][(k, l)] - want).abs());
                    }
                }
            }
        }
        assert!(worst < 1e-6, "max frame Riemann deviation {worst}");
    }
}
