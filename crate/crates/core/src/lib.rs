//! Entanglement measures on small bipartite quantum states, and the
//! machinery to exhibit pairs of states that two measures rank oppositely.
//!
//! Layers, bottom up:
//!
//! * [`linalg`]: complex matrices, Jacobi eigensolver, partial trace and
//!   transpose, matrix logarithm, entropies. Generic over `f32`/`f64`.
//! * [`states`]: density matrices, pure states, canonical families and
//!   seeded samplers.
//! * [`measures`]: entropy of entanglement, concurrence and entanglement of
//!   formation, relative entropy of entanglement.
//! * [`ordering`]: same-order comparison, sandwich construction, violation
//!   witnesses, batch search and family scans.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod measures;
pub mod ordering;
pub mod rng;
mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Double-precision complex matrix, the carrier used by the state layer.
pub type CMatrix = linalg::ComplexMatrix<f64>;
/// Single-precision complex matrix.
pub type CMatrix32 = linalg::ComplexMatrix<f32>;
/// Double-precision eigendecomposition.
pub type Eigen = linalg::EigenDecomposition<f64>;
