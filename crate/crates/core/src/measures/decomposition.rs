//! Direct minimization of the average pure-state entanglement over ensemble
//! decompositions of a two-qubit state.
//!
//! Every size-`m` decomposition of `ρ = Σ λ_i |v_i><v_i|` has members
//! `|φ_j> = Σ_i U_{ji} √λ_i |v_i>` for some `m x m` unitary `U`. The search
//! descends over `U` with steps `U ← U exp(−i t H)`, where `H` is the
//! Hermitian matrix assembled from 16 real gradient coordinates. It is an
//! upper bound on the entanglement of formation and shares no code with the
//! concurrence route.

use rand::Rng;
use rayon::prelude::*;

use super::descent::{minimize, DescentProblem, DescentSettings};
use super::{Diagnostics, MeasureId, MeasureValue, OptimizerConfig, Status};
use crate::error::Result;
use crate::linalg::{hermitian_eig, hermitian_eigenvalues_2x2};
use crate::states::{binary_entropy, haar_unitary, require_two_qubits, DensityMatrix, PureState, ROUNDOFF_TOL};
use crate::{CMatrix, C64};

/// Ensemble size searched; equals the largest possible rank for two qubits.
pub const ENSEMBLE_SIZE: usize = 4;
const FD_STEP: f64 = 1e-6;
/// Members lighter than this are dropped from the returned ensemble.
const NEGLIGIBLE_WEIGHT: f64 = 1e-14;

/// `ρ = Σ p_i |ψ_i><ψ_i|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    pub weights: Vec<f64>,
    pub members: Vec<PureState>,
}

impl Ensemble {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.members.first().map_or(0, |m| m.amplitudes().len());
        let mut out = CMatrix::zeros(n, n);
        for (p, m) in self.weights.iter().zip(&self.members) {
            out = &out + &CMatrix::outer(m.amplitudes()).scale(*p);
        }
        out
    }

    /// `Σ p_i E(ψ_i)`.
    pub fn average_entanglement(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.members)
            .map(|(p, m)| p * member_entanglement(m.amplitudes(), 1.0))
            .sum()
    }
}

/// Entropy of entanglement of `φ / √norm2` from the 2x2 reduced matrix.
fn member_entanglement(phi: &[C64], norm2: f64) -> f64 {
    let (a, b, c, d) = (phi[0], phi[1], phi[2], phi[3]);
    let r00 = (a.norm_sqr() + b.norm_sqr()) / norm2;
    let r11 = (c.norm_sqr() + d.norm_sqr()) / norm2;
    let r01 = (a * c.conj() + b * d.conj()) / norm2;
    let (_, small) = hermitian_eigenvalues_2x2(r00, r11, r01);
    binary_entropy(small.clamp(0.0, 0.5)).expect("clamped")
}

/// `exp(iH)` for Hermitian `H`.
fn expi(h: &CMatrix) -> CMatrix {
    let eig = hermitian_eig(&h.hermitian_part()).expect("generator is Hermitian");
    let n = eig.values.len();
    let v = &eig.vectors;
    CMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| v[(i, k)] * C64::from_polar(1.0, eig.values[k]) * v[(j, k)].conj()).sum()
    })
}

/// Hermitian matrix from 16 real coordinates: diagonal, then `(Re, Im)` of
/// each upper-triangular entry.
fn generator(coords: &[f64]) -> CMatrix {
    let m = ENSEMBLE_SIZE;
    let mut h = CMatrix::zeros(m, m);
    let mut k = m;
    for i in 0..m {
        h[(i, i)] = C64::new(coords[i], 0.0);
        for j in (i + 1)..m {
            let z = C64::new(coords[k], coords[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

struct DecompositionProblem {
    /// Columns `√λ_i v_i`.
    scaled: CMatrix,
}

impl DecompositionProblem {
    fn members(&self, u: &CMatrix) -> CMatrix {
        // row j of U * scaled^T is φ_j
        u * &self.scaled.transpose()
    }

    fn objective(&self, u: &CMatrix) -> f64 {
        let phis = self.members(u);
        (0..ENSEMBLE_SIZE)
            .map(|j| {
                let row: Vec<C64> = (0..4).map(|c| phis[(j, c)]).collect();
                let p: f64 = row.iter().map(|z| z.norm_sqr()).sum();
                if p <= NEGLIGIBLE_WEIGHT {
                    0.0
                } else {
                    p * member_entanglement(&row, p)
                }
            })
            .sum()
    }

    fn ensemble(&self, u: &CMatrix) -> Ensemble {
        let phis = self.members(u);
        let mut weights = Vec::new();
        let mut members = Vec::new();
        for j in 0..ENSEMBLE_SIZE {
            let row: Vec<C64> = (0..4).map(|c| phis[(j, c)]).collect();
            let p: f64 = row.iter().map(|z| z.norm_sqr()).sum();
            if p > NEGLIGIBLE_WEIGHT {
                weights.push(p);
                members.push(PureState::normalized((2, 2), row).expect("non-zero member"));
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Ensemble { weights, members }
    }
}

impl DescentProblem for DecompositionProblem {
    type Point = CMatrix;

    fn value(&self, u: &CMatrix) -> f64 {
        self.objective(u)
    }

    fn value_and_gradient(&self, u: &CMatrix) -> (f64, Vec<f64>) {
        let f = self.objective(u);
        let dim = ENSEMBLE_SIZE * ENSEMBLE_SIZE;
        let mut coords = vec![0.0; dim];
        let grad = (0..dim)
            .map(|i| {
                coords[i] = FD_STEP;
                let up = self.objective(&(u * &expi(&generator(&coords))));
                coords[i] = -FD_STEP;
                let down = self.objective(&(u * &expi(&generator(&coords))));
                coords[i] = 0.0;
                (up - down) / (2.0 * FD_STEP)
            })
            .collect();
        (f, grad)
    }

    fn retract(&self, u: &CMatrix, direction: &[f64], t: f64) -> CMatrix {
        let scaled: Vec<f64> = direction.iter().map(|d| -t * d).collect();
        u * &expi(&generator(&scaled))
    }
}

/// Upper bound on the entanglement of formation by direct search over
/// decompositions, with the best ensemble found.
pub fn eof_decomposition_search(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<(MeasureValue, Ensemble)> {
    require_two_qubits(rho.dims(), "decomposition search")?;
    cfg.check()?;
    let eig = hermitian_eig(rho.matrix())?;
    let rank = eig.values.iter().filter(|&&l| l > ROUNDOFF_TOL).count();

    if rank <= 1 {
        let psi = PureState::normalized((2, 2), eig.vectors.column(0))?;
        let ensemble = Ensemble { weights: vec![1.0], members: vec![psi] };
        let value = MeasureValue {
            measure: MeasureId::FormationSearch,
            value: ensemble.average_entanglement(),
            status: Status::UpperBound,
            diagnostics: Diagnostics { restarts: 0, iterations: 0, best_gradient_norm: 0.0, converged: true },
        };
        return Ok((value, ensemble));
    }

    let scaled = CMatrix::from_fn(4, ENSEMBLE_SIZE, |r, c| eig.vectors[(r, c)] * eig.values[c].max(0.0).sqrt());
    let problem = DecompositionProblem { scaled };
    let settings = DescentSettings {
        max_iterations: cfg.max_iterations,
        initial_step: cfg.initial_step,
        gradient_tol: cfg.gradient_tol,
        value_tol: cfg.value_tol,
    };

    let runs: Vec<_> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let start = if i == 0 {
                CMatrix::identity(ENSEMBLE_SIZE)
            } else {
                let mut rng = cfg.seed.child(i as u64).rng();
                // burn one draw so restart streams differ from the ansatz optimizer's
                let _: u64 = rng.random();
                haar_unitary(ENSEMBLE_SIZE, &mut rng)
            };
            minimize(&problem, start, &settings)
        })
        .collect();
    let iterations = runs.iter().map(|r| r.iterations).sum();
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one restart");

    let ensemble = problem.ensemble(&best.point);
    let value = MeasureValue {
        measure: MeasureId::FormationSearch,
        value: best.value.max(0.0),
        status: Status::UpperBound,
        diagnostics: Diagnostics {
            restarts: cfg.restarts,
            iterations,
            best_gradient_norm: best.gradient_norm,
            converged: best.converged,
        },
    };
    Ok((value, ensemble))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::eof_closed_form;
    use crate::rng::SeedSpec;
    use crate::states::{pure_with_schmidt, random_separable, werner};

    const EF_WERNER_075: f64 = 0.354_578_902_665_270_03;

    #[test]
    fn generator_is_hermitian_and_expi_unitary() {
        let coords: Vec<f64> = (0..16).map(|k| 0.1 * k as f64 - 0.7).collect();
        let h = generator(&coords);
        assert!(h.is_hermitian(0.0));
        let u = expi(&h);
        assert!((&u.adjoint() * &u).max_abs_diff(&CMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn pure_state_gives_singleton() {
        let psi = pure_with_schmidt(0.3).unwrap();
        let (v, ens) = eof_decomposition_search(&psi.density(), &OptimizerConfig::default()).unwrap();
        assert_eq!(ens.members.len(), 1);
        assert!((v.value - binary_entropy(0.3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn werner_agrees_with_closed_form() {
        let rho = werner(0.75).unwrap();
        let (v, ens) = eof_decomposition_search(&rho, &OptimizerConfig::default()).unwrap();
        assert!(v.value >= EF_WERNER_075 - 1e-9);
        assert!((v.value - EF_WERNER_075).abs() < 1e-3, "{}", v.value);
        assert!(ens.reconstruct().max_abs_diff(rho.matrix()) < 1e-8);
        assert!((ens.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!((ens.average_entanglement() - v.value).abs() < 1e-9);
    }

    #[test]
    fn separable_state_reaches_zero() {
        let rho = random_separable(16, SeedSpec::new(4, 1)).unwrap();
        let (v, _) = eof_decomposition_search(&rho, &OptimizerConfig::default()).unwrap();
        assert!(v.value <= 5e-3, "{}", v.value);
        assert_eq!(eof_closed_form(&rho).unwrap().value, 0.0);
    }
}
