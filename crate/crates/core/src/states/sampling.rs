//! Seeded samplers: Haar pure states, induced (Ginibre) mixed states,
//! separable mixtures and Haar unitaries.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use super::{check_dims, DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::linalg::{kron_vec, Dims};
use crate::rng::SeedSpec;
use crate::{CMatrix, C64};

/// Number of product terms used by [`random_separable`] unless told otherwise.
pub const DEFAULT_SEPARABLE_TERMS: usize = 16;

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn normal_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

fn normalize(v: &mut [C64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
}

/// Unitarily invariant random pure state.
pub fn haar_pure(dims: Dims, seed: SeedSpec) -> Result<PureState> {
    check_dims(dims)?;
    let mut rng = seed.rng();
    let mut amp = normal_vector(dims.0 * dims.1, &mut rng);
    normalize(&mut amp);
    PureState::new(dims, amp)
}

/// Haar-random qubit vector drawn from an existing stream.
pub fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    let mut v = [complex_normal(rng), complex_normal(rng)];
    normalize(&mut v);
    v
}

/// `G G^H / tr(G G^H)` with `G` a `(dA·dB) × k` complex Ginibre matrix.
pub fn ginibre_mixed(dims: Dims, k: usize, seed: SeedSpec) -> Result<DensityMatrix> {
    check_dims(dims)?;
    let n = dims.0 * dims.1;
    if k == 0 || k > n {
        return Err(Error::Domain(format!("Ginibre rank k = {k} outside 1..={n}")));
    }
    let mut rng = seed.rng();
    let g = CMatrix::from_vec(n, k, normal_vector(n * k, &mut rng))?;
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::validate(w.scale(1.0 / tr).hermitian_part(), dims)
}

/// Uniform point on the probability simplex.
pub fn dirichlet_weights<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// `Σ_k p_k |a_k><a_k| ⊗ |b_k><b_k|` with flat-Dirichlet weights and Haar
/// qubit factors; a two-qubit state separable by construction.
pub fn random_separable(terms: usize, seed: SeedSpec) -> Result<DensityMatrix> {
    if terms == 0 {
        return Err(Error::Domain("separable sampler needs at least one term".into()));
    }
    let mut rng = seed.rng();
    let weights = dirichlet_weights(terms, &mut rng);
    let mut mat = CMatrix::zeros(4, 4);
    for w in weights {
        let a = haar_qubit(&mut rng);
        let b = haar_qubit(&mut rng);
        mat = &mat + &CMatrix::outer(&kron_vec(&a, &b)).scale(w);
    }
    DensityMatrix::validate(mat.hermitian_part(), (2, 2))
}

/// Haar unitary by Gram–Schmidt on a Ginibre matrix (phases fixed by the
/// orthogonalization, which keeps the distribution invariant).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = normal_vector(n, rng);
        for _ in 0..2 {
            for u in &cols {
                let ip: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= ip * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|z| *z /= norm);
            cols.push(v);
        }
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}
