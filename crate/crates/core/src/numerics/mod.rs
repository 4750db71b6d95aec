//! Dense complex linear algebra shared by every other module.

mod expm;
mod matrix;
mod svd;

pub use expm::mat_exp;
pub use matrix::{kron, kron_vec, ComplexMatrix, C64, I, ONE, ZERO};
pub use svd::{hermitian_eigenvalues, hermitian_trace_norm, singular_values, trace_norm};
