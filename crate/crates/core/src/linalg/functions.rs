//! Spectral functions: base-2 matrix logarithm and entropies (in ebits).

use super::eig::{hermitian_eig, EigenDecomposition};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Overlap of `rho` with the null space of `sigma` above which the relative
/// entropy is reported as infinite.
pub const SUPPORT_OVERLAP_TOL: f64 = 1e-9;

/// `log2` of a PSD matrix restricted to its support.
#[derive(Clone, Debug)]
pub struct MatrixLog<T> {
    pub log: ComplexMatrix<T>,
    /// Eigendecomposition of the argument (descending eigenvalues).
    pub eig: EigenDecomposition<T>,
    /// `true` for eigen-indices treated as null space (`λ <= cutoff`).
    pub null_space: Vec<bool>,
}

fn check_psd<T: Real>(eig: &EigenDecomposition<T>) -> Result<()> {
    let min = eig.min_value();
    if min < -T::negativity_tol() {
        return Err(Error::NegativeEigenvalue(min.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

pub fn matrix_log_psd<T: Real>(a: &ComplexMatrix<T>, cutoff: T) -> Result<MatrixLog<T>> {
    let eig = hermitian_eig(a)?;
    check_psd(&eig)?;
    let null_space: Vec<bool> = eig.values.iter().map(|&l| l <= cutoff).collect();
    let log = eig.reconstruct_with(|l| if l <= cutoff { T::zero() } else { l.log2() });
    Ok(MatrixLog { log, eig, null_space })
}

/// `-Σ λ log2 λ` over a spectrum, skipping values at or below the cutoff.
pub fn spectrum_entropy<T: Real>(values: &[T], cutoff: T) -> T {
    values
        .iter()
        .filter(|&&l| l > cutoff)
        .map(|&l| -l * l.log2())
        .sum()
}

pub fn von_neumann_entropy<T: Real>(rho: &ComplexMatrix<T>) -> Result<T> {
    let eig = hermitian_eig(rho)?;
    check_psd(&eig)?;
    Ok(spectrum_entropy(&eig.values, T::support_cutoff()).max(T::zero()))
}

/// `S(ρ‖σ) = tr ρ log2 ρ − tr ρ log2 σ`, or `+∞` when the support of `ρ`
/// is not contained in the support of `σ`.
pub fn quantum_relative_entropy<T: Real>(rho: &ComplexMatrix<T>, sigma: &ComplexMatrix<T>) -> Result<T> {
    if rho.rows() != sigma.rows() || rho.cols() != sigma.cols() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy between {}x{} and {}x{}",
            rho.rows(),
            rho.cols(),
            sigma.rows(),
            sigma.cols()
        )));
    }
    let neg_entropy = -von_neumann_entropy(rho)?;
    let sig = hermitian_eig(sigma)?;
    check_psd(&sig)?;
    Ok(neg_entropy + cross_term(rho, &sig, T::support_cutoff()))
}

/// `-tr ρ log2 σ` from the eigendecomposition of `σ`; `+∞` when `ρ` has
/// weight on the null space of `σ`.
pub fn cross_term<T: Real>(rho: &ComplexMatrix<T>, sigma: &EigenDecomposition<T>, cutoff: T) -> T {
    let n = sigma.values.len();
    let mut acc = T::zero();
    let mut null_overlap = T::zero();
    for (j, &l) in sigma.values.iter().enumerate() {
        let v = sigma.vectors.column(j);
        let rv = rho.mat_vec(&v);
        let w = (0..n).map(|i| (v[i].conj() * rv[i]).re).sum::<T>();
        if l <= cutoff {
            null_overlap += w;
        } else {
            acc -= w * l.log2();
        }
    }
    if null_overlap > T::lit(SUPPORT_OVERLAP_TOL) {
        T::infinity()
    } else {
        acc
    }
}
