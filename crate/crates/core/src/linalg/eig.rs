//! Cyclic complex Jacobi eigensolver for small Hermitian matrices.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in descending order with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    /// `V f(Λ) V^H`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let fv: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = Complex::zero();
            for k in 0..n {
                acc += v[(i, k)] * v[(j, k)].conj() * fv[k];
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(|l| l)
    }

    pub fn min_value(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }
}

/// Hermitian eigendecomposition with the default symmetry tolerance.
pub fn hermitian_eig<T: Real>(a: &ComplexMatrix<T>) -> Result<EigenDecomposition<T>> {
    hermitian_eig_tol(a, T::structural_tol())
}

pub fn hermitian_eig_tol<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Result<EigenDecomposition<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let dev = a.hermiticity_deviation();
    if dev > tol {
        return Err(Error::NotHermitian {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(jacobi(a.hermitian_part()))
}

fn jacobi<T: Real>(a: ComplexMatrix<T>) -> EigenDecomposition<T> {
    let n = a.rows();
    let mut a = a.into_vec();
    let mut v = ComplexMatrix::<T>::identity(n).into_vec();
    jacobi_in_place(&mut a, &mut v, n);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.partial_cmp(&a[i * n + i].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[i * n + order[j]]);
    EigenDecomposition { values, vectors }
}

/// Diagonalizes the Hermitian row-major `n x n` matrix `a` in place,
/// accumulating the rotations into `v` (which should start as the identity).
/// Eigenvalues are left unsorted on the diagonal of `a`, eigenvectors in the
/// columns of `v`.
pub(crate) fn jacobi_in_place<T: Real>(a: &mut [Complex<T>], v: &mut [Complex<T>], n: usize) {
    debug_assert!(a.len() == n * n && v.len() == n * n);
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    // rotations below this size cannot move the result at working precision
    let skip = T::epsilon() * scale / T::lit(n.max(1) as f64);
    let stop = T::epsilon() * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i * n + j].norm_sqr();
            }
        }
        let off = (off + off).sqrt();
        if off <= stop || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(a, v, n, p, q, skip);
            }
        }
    }
}

/// One unitary rotation in the (p, q) plane annihilating `a[p][q]`, on
/// row-major `n x n` storage.
///
/// The rotation is `J = diag(1, e^{-iφ}) R` on the plane, where `φ = arg a_pq`
/// and `R` is the real Jacobi rotation of the phase-stripped 2x2 block.
fn rotate<T: Real>(a: &mut [Complex<T>], v: &mut [Complex<T>], n: usize, p: usize, q: usize, skip: T) {
    let apq = a[p * n + q];
    let mag = apq.norm_sqr().sqrt();
    if mag <= skip {
        a[p * n + q] = Complex::zero();
        a[q * n + p] = Complex::zero();
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = apq / mag; // e^{iφ}
    let theta = (aqq - app) / (T::lit(2.0) * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let ps = phase.conj() * s;
    let pc = phase.conj() * c;

    // A <- A J
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * ps;
        a[k * n + q] = akp * s + akq * pc;
    }
    // A <- J^H A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * ps.conj();
        a[q * n + k] = apk * s + aqk * pc.conj();
    }
    a[p * n + q] = Complex::zero();
    a[q * n + p] = Complex::zero();
    a[p * n + p].im = T::zero();
    a[q * n + q].im = T::zero();

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c - vkq * ps;
        v[k * n + q] = vkp * s + vkq * pc;
    }
}

/// Eigenvalues of a 2x2 Hermitian matrix in closed form, descending.
pub fn hermitian_eigenvalues_2x2<T: Real>(a: T, d: T, b: Complex<T>) -> (T, T) {
    let half = T::lit(0.5);
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let r = (diff * diff + b.norm_sqr()).sqrt();
    (mean + r, mean - r)
}
