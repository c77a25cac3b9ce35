//! Optimal frame designs under joint norm constraints.
//!
//! Given target positive semidefinite operators `S_1, ..., S_m` on spaces
//! `C^{d_1}, ..., C^{d_m}` and a non-increasing weight sequence
//! `alpha_1 >= ... >= alpha_n > 0`, this crate computes the exact minimum of
//! the squared joint frame operator distance
//!
//! ```text
//! Theta(Phi) = sum_j || S_j - S_{F_j} ||_F^2
//! ```
//!
//! over all m-tuples `Phi = (F_1, ..., F_m)` of n-vector families with
//! `sum_j ||f_{i,j}||^2 = alpha_i` for every index i, and synthesizes designs
//! attaining it.
//!
//! # Module map
//!
//! - [`linalg`] — dense complex Hermitian primitives (frame operators, a
//!   cyclic Jacobi eigensolver, Frobenius distances).
//! - [`majorization`] — majorization predicates and the piecewise-linear
//!   waterfilling level solver.
//! - [`spectrum`] — the blockwise waterfilling construction of the optimal
//!   spectral gaps `delta_j` and the minimal distance value.
//! - [`synthesis`] — Schur-Horn constructions turning optimal spectra into
//!   actual designs.
//! - [`descent`] — projected gradient descent over the design manifold, used
//!   to confirm empirically that local minimizers are global.
//! - [`gframes`] — the operator-valued (G-frame) approximation problem,
//!   reduced to the single-space vector problem and lifted back.

pub mod descent;
pub mod error;
pub mod gframes;
pub mod linalg;
pub mod majorization;
pub mod spectrum;
pub mod synthesis;

#[cfg(test)]
pub(crate) mod test_support;

pub use error::Error;
