//! Complex Clifford algebra representations.
//!
//! Generators satisfy γ_i γ_j + γ_j γ_i = −2 δ_ij and are skew-Hermitian.
//! For even n the representation carries a Hermitian grading ε with ε² = 1
//! anticommuting with every generator; for odd n it carries the complex
//! volume form Γ = (√−1)^((n+1)/2) γ_1⋯γ_n, which is central with Γ² = 1.
//!
//! The ω_X matrices are the Hermitian involutions representing ε̄ c̄(X)
//! (even n) resp. √−1 c̄(X) (odd n) in a fixed spinor basis; they satisfy
//! ω_X ω_Y + ω_Y ω_X = 2⟨X,Y⟩.

use crate::linalg::{eye, fix_column_phases, hermitian_eigen, kron, max_abs, CMat, C64, I, ONE};
use crate::{Error, Result};

/// A concrete complex spinor representation in dimension `n` on ℂ^m,
/// m = 2^⌊n/2⌋.
#[derive(Debug, Clone)]
pub struct CliffordRep {
    pub n: usize,
    pub m: usize,
    /// Skew-Hermitian generators γ_1 .. γ_n.
    pub gammas: Vec<CMat>,
    /// Grading operator ε (present iff n is even).
    pub grading: Option<CMat>,
    /// Complex volume form Γ (present iff n is odd).
    pub volume: Option<CMat>,
}

fn pauli() -> (CMat, CMat, CMat) {
    let z = C64::new(0.0, 0.0);
    let s1 = CMat::from_row_slice(2, 2, &[z, ONE, ONE, z]);
    let s2 = CMat::from_row_slice(2, 2, &[z, -I, I, z]);
    let s3 = CMat::from_row_slice(2, 2, &[ONE, z, z, -ONE]);
    (s1, s2, s3)
}

/// Hermitian anticommuting generators G_i with G_i² = +1 via the standard
/// iterated 2×2 tensor (Jordan–Wigner) construction; deterministic.
fn hermitian_generators(n: usize) -> Vec<CMat> {
    let k = n / 2;
    let (s1, s2, s3) = pauli();
    let id2 = eye(2);
    let build = |slot: usize, op: &CMat| -> CMat {
        // σ3 ⊗ .. ⊗ σ3 ⊗ op ⊗ I ⊗ .. ⊗ I  (`slot` copies of σ3 in front)
        let mut acc = eye(1);
        for j in 0..k.max(1) {
            let factor = if j < slot {
                &s3
            } else if j == slot {
                op
            } else {
                &id2
            };
            acc = kron(&acc, factor);
        }
        acc
    };
    let mut gens = Vec::with_capacity(n);
    for j in 0..k {
        gens.push(build(j, &s1));
        gens.push(build(j, &s2));
    }
    if n % 2 == 1 {
        // G_n = σ3^{⊗k}
        let mut acc = eye(1);
        for _ in 0..k {
            acc = kron(&acc, &s3);
        }
        gens.push(acc);
    }
    gens
}

/// Build the representation for dimension `n` ≥ 2. Deterministic: the same
/// `n` always yields bit-identical matrices.
pub fn build_clifford_rep(n: usize) -> Result<CliffordRep> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let gammas: Vec<CMat> = hermitian_generators(n)
        .into_iter()
        .map(|g| g.map(|z| I * z))
        .collect();
    let m = gammas[0].nrows();
    // volume element prefactor (√−1)^((n+1)/2) with ⌊·⌋ for even n
    let pow = (n + 1) / 2;
    let mut vol = eye(m);
    for g in &gammas {
        vol = vol * g;
    }
    let mut pref = ONE;
    for _ in 0..pow {
        pref *= I;
    }
    vol = vol.map(|z| pref * z);
    let (grading, volume) = if n % 2 == 0 {
        (Some(vol), None)
    } else {
        // the central volume acts as ±1 on an irreducible module; normalize
        // the sign so the projector (1 + Γ)/2 is the identity rather than 0
        let sign = if vol[(0, 0)].re < 0.0 { -ONE } else { ONE };
        (None, Some(vol.map(|z| sign * z)))
    };
    Ok(CliffordRep {
        n,
        m,
        gammas,
        grading,
        volume,
    })
}

impl CliffordRep {
    /// Clifford action γ(X) = Σ X_i γ_i of a (not necessarily unit) vector.
    pub fn gamma(&self, x: &[f64]) -> Result<CMat> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut acc = CMat::zeros(self.m, self.m);
        for (xi, g) in x.iter().zip(&self.gammas) {
            acc += g.map(|z| z * C64::new(*xi, 0.0));
        }
        Ok(acc)
    }

    /// Grading operator; panics if called on an odd-dimensional rep.
    pub fn epsilon(&self) -> &CMat {
        self.grading
            .as_ref()
            .expect("grading requested from an odd-dimensional representation")
    }

    /// Conjugate the whole representation by a unitary: γ → U* γ U.
    pub fn conjugated(&self, u: &CMat) -> CliffordRep {
        let uh = u.adjoint();
        let conj = |a: &CMat| -> CMat { &uh * a * u };
        CliffordRep {
            n: self.n,
            m: self.m,
            gammas: self.gammas.iter().map(conj).collect(),
            grading: self.grading.as_ref().map(conj),
            volume: self.volume.as_ref().map(conj),
        }
    }
}

/// ω_X for a unit vector X together with its matrix.
#[derive(Debug, Clone)]
pub struct OmegaMatrix {
    pub x: Vec<f64>,
    pub matrix: CMat,
}

/// Unnormalized ω map, linear in X: ε·γ(X) for even n, √−1·γ(X) for odd n.
pub fn omega_matrix_raw(rep: &CliffordRep, x: &[f64]) -> Result<CMat> {
    let g = rep.gamma(x)?;
    Ok(match &rep.grading {
        Some(eps) => eps * g,
        None => g.map(|z| I * z),
    })
}

/// ω_X for unit X; rejects non-unit input (callers must normalize).
pub fn omega_matrix(rep: &CliffordRep, x: &[f64]) -> Result<OmegaMatrix> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitVector(norm));
    }
    Ok(OmegaMatrix {
        x: x.to_vec(),
        matrix: omega_matrix_raw(rep, x)?,
    })
}

/// Basis change U (unitary) with U* ω_{N0} U = diag(+1 × m/2, −1 × m/2).
///
/// Returns the identity when ω_{N0} is already diagonal in that pattern.
pub fn diagonalize_omega(rep: &CliffordRep, n0: &[f64]) -> Result<CMat> {
    let om = omega_matrix(rep, n0)?.matrix;
    let m = rep.m;
    // short-circuit: already diag(+1.., −1..)?
    let mut already = true;
    for r in 0..m {
        for c in 0..m {
            let want = if r == c {
                if r < m / 2 {
                    ONE
                } else {
                    -ONE
                }
            } else {
                C64::new(0.0, 0.0)
            };
            if (om[(r, c)] - want).norm() > 1e-12 {
                already = false;
            }
        }
    }
    if already {
        return Ok(eye(m));
    }
    let (vals, vecs) = hermitian_eigen(&om);
    // ascending order: −1 block first; reorder to +1 block first
    let mut u = CMat::zeros(m, m);
    for k in 0..m / 2 {
        // +1 eigenvectors are the last m/2 columns
        u.set_column(k, &vecs.column(m / 2 + k).into_owned());
        u.set_column(m / 2 + k, &vecs.column(k).into_owned());
    }
    for (k, v) in vals.iter().enumerate() {
        let expect = if k < m / 2 { -1.0 } else { 1.0 };
        if (v - expect).abs() > 1e-10 {
            return Err(Error::Inconsistent(format!(
                "omega eigenvalue {v} deviates from ±1"
            )));
        }
    }
    Ok(fix_column_phases(u))
}

/// Max residual of the defining relation γ_iγ_j + γ_jγ_i + 2δ_ij over all i, j.
pub fn anticommutation_residual(rep: &CliffordRep) -> f64 {
    let m = rep.m;
    let mut worst = 0.0f64;
    for i in 0..rep.n {
        for j in 0..rep.n {
            let mut ac = &rep.gammas[i] * &rep.gammas[j] + &rep.gammas[j] * &rep.gammas[i];
            if i == j {
                ac += eye(m).map(|z| z * C64::new(2.0, 0.0));
            }
            worst = worst.max(max_abs(&ac));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{anticommutator, commutator, is_hermitian, max_abs_diff};

    #[test]
    fn rejects_n_below_two() {
        assert!(matches!(
            build_clifford_rep(1),
            Err(Error::InvalidDimension(1))
        ));
    }

    #[test]
    fn generator_relations_all_dims() {
        for n in 2..=7 {
            let rep = build_clifford_rep(n).unwrap();
            assert_eq!(rep.m, 1 << (n / 2));
            assert!(anticommutation_residual(&rep) < 1e-12, "n = {n}");
            for g in &rep.gammas {
                assert!(max_abs_diff(&g.adjoint(), &-g) < 1e-15, "skew-Hermitian");
            }
        }
    }

    #[test]
    fn n2_defining_relations() {
        let rep = build_clifford_rep(2).unwrap();
        let ac = anticommutator(&rep.gammas[0], &rep.gammas[1]);
        assert!(max_abs(&ac) < 1e-15);
        let sq = &rep.gammas[0] * &rep.gammas[0];
        assert!(max_abs_diff(&sq, &-eye(2)) < 1e-15);
    }

    #[test]
    fn grading_even_dims() {
        for n in [2usize, 4, 6] {
            let rep = build_clifford_rep(n).unwrap();
            let eps = rep.epsilon();
            assert!(is_hermitian(eps, 1e-15));
            assert!(max_abs_diff(&(eps * eps), &eye(rep.m)) < 1e-12);
            for g in &rep.gammas {
                assert!(max_abs(&anticommutator(eps, g)) < 1e-12);
            }
        }
    }

    #[test]
    fn n4_grading_eigenvalues() {
        let rep = build_clifford_rep(4).unwrap();
        let (vals, _) = hermitian_eigen(rep.epsilon());
        let minus = vals.iter().filter(|v| (**v + 1.0).abs() < 1e-12).count();
        let plus = vals.iter().filter(|v| (**v - 1.0).abs() < 1e-12).count();
        assert_eq!((plus, minus), (2, 2));
    }

    #[test]
    fn volume_odd_dims() {
        for n in [3usize, 5, 7] {
            let rep = build_clifford_rep(n).unwrap();
            let vol = rep.volume.as_ref().unwrap();
            assert!(max_abs_diff(&(vol * vol), &eye(rep.m)) < 1e-12, "n = {n}");
            for g in &rep.gammas {
                assert!(max_abs(&commutator(vol, g)) < 1e-12, "n = {n}");
            }
        }
    }

    #[test]
    fn omega_hermitian_involution() {
        for n in 2..=6 {
            let rep = build_clifford_rep(n).unwrap();
            let mut x = vec![0.0; n];
            x[0] = 0.6;
            x[1] = 0.8;
            let om = omega_matrix(&rep, &x).unwrap().matrix;
            assert!(is_hermitian(&om, 1e-12));
            assert!(max_abs_diff(&(&om * &om), &eye(rep.m)) < 1e-12);
        }
    }

    #[test]
    fn omega_anticommutation_identity() {
        let rep = build_clifford_rep(4).unwrap();
        let x = [1.0, 0.0, 0.0, 0.0];
        let y = [0.0, 1.0, 0.0, 0.0];
        let ox = omega_matrix(&rep, &x).unwrap().matrix;
        let oy = omega_matrix(&rep, &y).unwrap().matrix;
        assert!(max_abs(&anticommutator(&ox, &oy)) < 1e-12);
        // non-orthogonal pair: ω_Xω_Y + ω_Yω_X = 2⟨X,Y⟩
        let z = [0.6, 0.8, 0.0, 0.0];
        let oz = omega_matrix(&rep, &z).unwrap().matrix;
        let expect = eye(rep.m).map(|w| w * C64::new(2.0 * 0.6, 0.0));
        assert!(max_abs_diff(&anticommutator(&ox, &oz), &expect) < 1e-12);
    }

    #[test]
    fn omega_rejects_non_unit() {
        let rep = build_clifford_rep(3).unwrap();
        assert!(matches!(
            omega_matrix(&rep, &[2.0, 0.0, 0.0]),
            Err(Error::NonUnitVector(_))
        ));
    }

    #[test]
    fn omega_linear_in_x() {
        let rep = build_clifford_rep(5).unwrap();
        let x = [0.3, -0.2, 0.9, 0.1, -0.4];
        let y = [1.0, 2.0, 0.0, -1.0, 0.5];
        let (a, b) = (0.7, -1.3);
        let combo: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let lhs = omega_matrix_raw(&rep, &combo).unwrap();
        let rhs = omega_matrix_raw(&rep, &x).unwrap().map(|z| z * C64::new(a, 0.0))
            + omega_matrix_raw(&rep, &y).unwrap().map(|z| z * C64::new(b, 0.0));
        assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn diagonalize_omega_first_axis() {
        for n in 2..=6 {
            let rep = build_clifford_rep(n).unwrap();
            let mut n0 = vec![0.0; n];
            n0[0] = 1.0;
            let u = diagonalize_omega(&rep, &n0).unwrap();
            assert!(max_abs_diff(&(&u.adjoint() * &u), &eye(rep.m)) < 1e-12);
            let om = omega_matrix(&rep, &n0).unwrap().matrix;
            let d = &u.adjoint() * &om * &u;
            for r in 0..rep.m {
                for c in 0..rep.m {
                    let want = if r == c {
                        if r < rep.m / 2 {
                            1.0
                        } else {
                            -1.0
                        }
                    } else {
                        0.0
                    };
                    assert!((d[(r, c)] - C64::new(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn diagonalize_omega_second_axis_n4() {
        let rep = build_clifford_rep(4).unwrap();
        let n0 = [0.0, 1.0, 0.0, 0.0];
        let u = diagonalize_omega(&rep, &n0).unwrap();
        let om = omega_matrix(&rep, &n0).unwrap().matrix;
        let d = &u.adjoint() * &om * &u;
        for r in 0..rep.m {
            for c in 0..rep.m {
                if r != c {
                    assert!(d[(r, c)].norm() < 1e-12);
                }
            }
        }
        // trace invariance under similarity
        assert!(om.trace().norm() < 1e-12);
        assert!(d.trace().norm() < 1e-12);
    }

    #[test]
    fn diagonalize_identity_shortcircuit() {
        let rep = build_clifford_rep(4).unwrap();
        let n0 = [1.0, 0.0, 0.0, 0.0];
        let u = diagonalize_omega(&rep, &n0).unwrap();
        let rot = rep.conjugated(&u);
        // in the rotated rep, ω_{N0} is diagonal, so a second call returns I
        let u2 = diagonalize_omega(&rot, &n0).unwrap();
        assert!(max_abs_diff(&u2, &eye(rep.m)) < 1e-14);
        // rotated rep still satisfies all invariants
        assert!(anticommutation_residual(&rot) < 1e-12);
    }

    #[test]
    fn determinism() {
        let a = build_clifford_rep(6).unwrap();
        let b = build_clifford_rep(6).unwrap();
        for (x, y) in a.gammas.iter().zip(&b.gammas) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn omega_n0_commutation_structure() {
        // ω_{N0} anticommutes with ω_X for X ⟂ N0 (exact)
        for n in [4usize, 5] {
            let rep = build_clifford_rep(n).unwrap();
            let mut n0 = vec![0.0; n];
            n0[0] = 1.0;
            let mut x = vec![0.0; n];
            x[2] = 1.0;
            let o0 = omega_matrix(&rep, &n0).unwrap().matrix;
            let ox = omega_matrix(&rep, &x).unwrap().matrix;
            assert!(max_abs(&anticommutator(&o0, &ox)) < 1e-12);
        }
    }
}
