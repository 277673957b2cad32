//! Tensor products and subsystem operations on bipartite operators.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One side of a bipartite split `A ⊗ B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Local dimensions `(dA, dB)` of a bipartite space.
pub type Dims = (usize, usize);

pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Tensor product of two state vectors.
pub fn kron_vec<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

fn check_bipartite<T: Real>(rho: &ComplexMatrix<T>, (da, db): Dims) -> Result<()> {
    let n = da * db;
    if rho.rows() != n || rho.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on a {da}x{db} bipartite space",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(())
}

/// Traces out the subsystem that is not `keep`.
pub fn partial_trace<T: Real>(rho: &ComplexMatrix<T>, dims: Dims, keep: Subsystem) -> Result<ComplexMatrix<T>> {
    check_bipartite(rho, dims)?;
    let (da, db) = dims;
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).fold(Complex::zero(), |acc, k| acc + rho[(i * db + k, j * db + k)])
        }),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da).fold(Complex::zero(), |acc, k| acc + rho[(k * db + i, k * db + j)])
        }),
    };
    Ok(out)
}

/// Transposes the indices of subsystem `side` only.
pub fn partial_transpose<T: Real>(rho: &ComplexMatrix<T>, dims: Dims, side: Subsystem) -> Result<ComplexMatrix<T>> {
    check_bipartite(rho, dims)?;
    let (_, db) = dims;
    let out = ComplexMatrix::from_fn(rho.rows(), rho.cols(), |r, c| {
        let (ia, ib) = (r / db, r % db);
        let (ja, jb) = (c / db, c % db);
        match side {
            Subsystem::A => rho[(ja * db + ib, ia * db + jb)],
            Subsystem::B => rho[(ia * db + jb, ja * db + ib)],
        }
    });
    Ok(out)
}
