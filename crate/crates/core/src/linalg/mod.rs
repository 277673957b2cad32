//! Dense complex linear algebra for small Hermitian operators.
//!
//! Everything here is generic over [`Real`](crate::Real) so the same kernels
//! run in `f32` and `f64`; the state and measure layers use `f64` only.

mod eig;
mod functions;
mod matrix;
mod ops;

pub(crate) use eig::jacobi_in_place;
pub use eig::{hermitian_eig, hermitian_eig_tol, hermitian_eigenvalues_2x2, EigenDecomposition};
pub use functions::{
    cross_term, matrix_log_psd, quantum_relative_entropy, spectrum_entropy, von_neumann_entropy,
    MatrixLog, SUPPORT_OVERLAP_TOL,
};
pub use matrix::ComplexMatrix;
pub use ops::{kron, kron_vec, partial_trace, partial_transpose, Dims, Subsystem};
