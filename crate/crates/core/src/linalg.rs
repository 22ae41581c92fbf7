//! Small helpers for dense complex matrices used throughout the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Identity matrix of size m.
pub fn eye(m: usize) -> CMat {
    CMat::identity(m, m)
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Max absolute entry of a matrix (entrywise sup norm).
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// ‖a − b‖ in the entrywise sup norm.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

/// Frobenius inner product ⟨a, b⟩ = Σ a_ij conj(b_ij).
pub fn frob_inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

/// Hermitian conjugate.
pub fn dagger(a: &CMat) -> CMat {
    a.adjoint()
}

/// Is the matrix Hermitian to the given tolerance?
pub fn is_hermitian(a: &CMat, tol: f64) -> bool {
    max_abs_diff(a, &a.adjoint()) < tol
}

/// Anticommutator a·b + b·a.
pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

/// Commutator a·b − b·a.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Eigenvalues of a Hermitian matrix, ascending, with orthonormal eigenvectors.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let se = a.clone().symmetric_eigen();
    let mut idx: Vec<usize> = (0..se.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| se.eigenvalues[i]).collect();
    let m = a.nrows();
    let mut vecs = CMat::zeros(m, m);
    for (k, &i) in idx.iter().enumerate() {
        vecs.set_column(k, &se.eigenvectors.column(i).into_owned());
    }
    (vals, vecs)
}

/// Fix the phase of each column so the largest-modulus entry is real positive.
/// Makes eigenvector bases deterministic up to degenerate-subspace rotations.
pub fn fix_column_phases(mut a: CMat) -> CMat {
    for mut col in a.column_iter_mut() {
        let mut best = 0usize;
        let mut best_norm = 0.0f64;
        for (i, z) in col.iter().enumerate() {
            if z.norm() > best_norm + 1e-14 {
                best_norm = z.norm();
                best = i;
            }
        }
        if best_norm > 0.0 {
            let phase = col[best] / C64::new(best_norm, 0.0);
            let corr = phase.conj();
            for z in col.iter_mut() {
                *z *= corr;
            }
        }
    }
    a
}
