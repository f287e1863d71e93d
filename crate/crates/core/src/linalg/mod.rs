//! Dense complex linear algebra: system-matrix assembly, LU determinant
//! and solve, and a shifted-QR eigensolver.
//!
//! Everything here is sized for layer-count matrices (N ≤ 64, documented
//! limit): no balancing, no blocking, no sparsity. The LU determinant is
//! the numerical oracle the characteristic-polynomial routes are checked
//! against, so it stays deliberately plain.

mod assemble;
mod dense;
mod eig;
mod lu;

pub use assemble::{
    assemble_2d, assemble_3d, e_tilde_vector, e_vector, k_matrix, p_matrix_2d, p_matrix_3d,
    shift_matrix, xi_inverse, xi_matrix, SystemMatrices,
};
pub use dense::{DenseMatrix, DenseVector};
pub use eig::{eig_dense, eig_with_vectors};
pub use lu::{lin_solve, lu_det, LuFactors};
