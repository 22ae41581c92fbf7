//! Verification kernels for warped-product scalar-curvature rigidity:
//! Clifford algebra representations, warped metric curvature formulas with
//! finite-difference oracles, imaginary Killing spinor transport on the
//! Poincaré half-space model, Brendle polytope smoothing with Gauss-map
//! trace norms, and the modified Dirac operator machinery with its
//! integrated Schrödinger–Lichnerowicz identity.

pub mod clifford;
pub mod curvature;
pub mod dirac;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod polytope;
pub mod spinor;
pub mod warped;

pub use error::Error;

/// Common result type.
pub type Result<T> = std::result::Result<T, Error>;
