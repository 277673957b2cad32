//! Relative entropy of entanglement for two qubits.
//!
//! `E_R(ρ) = min_σ S(ρ‖σ)` over separable `σ`, which for two qubits is the
//! same set as the PPT states. The minimization runs over a mixture of `K`
//! product pure states parametrized by Bloch angles and softmax weights.
//! The iterate is mixed with the identity, `σ_τ = (1 − τ) σ + τ I/4`, and
//! `τ` is lowered through [`BARRIER_SCHEDULE`] so the objective stays finite
//! while the optimum approaches the boundary of the separable set.

use std::f64::consts::{LN_2, PI};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::descent::{euclidean_step, minimize, DescentProblem, DescentSettings};
use super::{Diagnostics, MeasureId, MeasureValue, OptimizerConfig, Status};
use crate::error::Result;
use crate::linalg::{jacobi_in_place, von_neumann_entropy, SUPPORT_OVERLAP_TOL};
use crate::states::{require_two_qubits, DensityMatrix};
use crate::{CMatrix, C64};

/// Identity-mixing weights, applied in order, one descent phase each.
pub const BARRIER_SCHEDULE: [f64; 9] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10];

/// Parameters per product term: `θ_a, φ_a, θ_b, φ_b, logit`.
const PER_TERM: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

impl BlochAngles {
    /// `cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`, angles wrapped into
    /// `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub fn canonical(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(2.0 * PI);
        let mut phi = phi;
        if theta > PI {
            theta = 2.0 * PI - theta;
            phi += PI;
        }
        Self { theta, phi: phi.rem_euclid(2.0 * PI) }
    }

    pub fn vector(self) -> [C64; 2] {
        qubit(self.theta, self.phi)
    }
}

fn qubit(theta: f64, phi: f64) -> [C64; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    [C64::new(c, 0.0), C64::from_polar(s, phi)]
}

fn kron2(a: &[C64; 2], b: &[C64; 2]) -> [C64; 4] {
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

/// A separable two-qubit state `(1 − τ) Σ_k p_k |a_k b_k><a_k b_k| + τ I/4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparableAnsatz {
    pub weights: Vec<f64>,
    pub locals: Vec<[BlochAngles; 2]>,
    /// Identity-mixing weight `τ`.
    pub barrier: f64,
}

impl SeparableAnsatz {
    fn from_params(x: &[f64], barrier: f64) -> Self {
        let terms = x.len() / PER_TERM;
        let weights = softmax(&(0..terms).map(|k| x[k * PER_TERM + 4]).collect::<Vec<_>>());
        let locals = (0..terms)
            .map(|k| {
                let t = &x[k * PER_TERM..];
                [BlochAngles::canonical(t[0], t[1]), BlochAngles::canonical(t[2], t[3])]
            })
            .collect();
        Self { weights, locals, barrier }
    }

    pub fn sigma(&self) -> CMatrix {
        let mut s = CMatrix::zeros(4, 4);
        for (w, [a, b]) in self.weights.iter().zip(&self.locals) {
            s = &s + &CMatrix::outer(&kron2(&a.vector(), &b.vector())).scale(*w);
        }
        mix_identity(&s, self.barrier)
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::validate(self.sigma(), (2, 2))
    }
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|x| x / z).collect()
}

fn mix_identity(s: &CMatrix, tau: f64) -> CMatrix {
    let mut out = s.scale(1.0 - tau);
    for i in 0..4 {
        out[(i, i)] += C64::new(0.25 * tau, 0.0);
    }
    out
}

/// `f(x) = S(ρ ‖ σ_τ(x))` as a function of the flat ansatz parameters.
#[derive(Clone, Debug)]
pub struct AnsatzObjective {
    rho: CMatrix,
    neg_entropy: f64,
    barrier: f64,
}

/// One product term with its trig evaluated once: `(sin θ/2, cos θ/2, e^{iφ})`
/// per qubit.
#[derive(Clone, Copy)]
struct Term {
    local: [(f64, f64, C64); 2],
    vector: [C64; 4],
}

impl Term {
    fn new(t: &[f64]) -> Self {
        let local = [angles(t[0], t[1]), angles(t[2], t[3])];
        let vector = kron2(&qubit_from(local[0]), &qubit_from(local[1]));
        Self { local, vector }
    }

    /// `∂|a b>/∂(θ_a, φ_a, θ_b, φ_b)`.
    fn partials(&self) -> [[C64; 4]; 4] {
        let (a, b) = (qubit_from(self.local[0]), qubit_from(self.local[1]));
        let d = |(s, c, e): (f64, f64, C64)| ([C64::new(-0.5 * s, 0.0), e * (0.5 * c)], [C64::new(0.0, 0.0), e * C64::new(0.0, s)]);
        let (da_t, da_p) = d(self.local[0]);
        let (db_t, db_p) = d(self.local[1]);
        [kron2(&da_t, &b), kron2(&da_p, &b), kron2(&a, &db_t), kron2(&a, &db_p)]
    }
}

fn angles(theta: f64, phi: f64) -> (f64, f64, C64) {
    let (s, c) = (0.5 * theta).sin_cos();
    let (ps, pc) = phi.sin_cos();
    (s, c, C64::new(pc, ps))
}

fn qubit_from((s, c, e): (f64, f64, C64)) -> [C64; 2] {
    [C64::new(c, 0.0), e * s]
}

/// Row-major 4x4 complex storage.
type M4 = [C64; 16];

/// `σ_τ` diagonalized in place: eigenvalues (unsorted) and eigenvector columns.
struct SigmaSpectrum {
    values: [f64; 4],
    vectors: M4,
}

impl AnsatzObjective {
    pub fn new(rho: &DensityMatrix, barrier: f64) -> Result<Self> {
        require_two_qubits(rho.dims(), "relative entropy of entanglement")?;
        Ok(Self { rho: rho.matrix().clone(), neg_entropy: -von_neumann_entropy(rho.matrix())?, barrier })
    }

    pub fn with_barrier(&self, barrier: f64) -> Self {
        Self { barrier, ..self.clone() }
    }

    pub fn barrier(&self) -> f64 {
        self.barrier
    }

    pub fn parameter_count(terms: usize) -> usize {
        terms * PER_TERM
    }

    fn terms(x: &[f64]) -> (Vec<f64>, Vec<Term>) {
        let logits: Vec<f64> = x.chunks_exact(PER_TERM).map(|t| t[4]).collect();
        (softmax(&logits), x.chunks_exact(PER_TERM).map(Term::new).collect())
    }

    fn spectrum(&self, weights: &[f64], terms: &[Term]) -> SigmaSpectrum {
        let mut s: M4 = [C64::new(0.0, 0.0); 16];
        for (w, t) in weights.iter().zip(terms) {
            let v = &t.vector;
            for i in 0..4 {
                let wi = v[i] * ((1.0 - self.barrier) * w);
                for j in 0..4 {
                    s[i * 4 + j] += wi * v[j].conj();
                }
            }
        }
        for i in 0..4 {
            s[i * 5] = C64::new(s[i * 5].re + 0.25 * self.barrier, 0.0);
        }
        let mut vectors: M4 = [C64::new(0.0, 0.0); 16];
        for i in 0..4 {
            vectors[i * 5] = C64::new(1.0, 0.0);
        }
        jacobi_in_place(&mut s, &mut vectors, 4);
        SigmaSpectrum { values: [s[0].re, s[5].re, s[10].re, s[15].re], vectors }
    }

    /// `V^H ρ V`.
    fn rotated_rho(&self, v: &M4) -> M4 {
        let r = self.rho.as_slice();
        let mut rv: M4 = [C64::new(0.0, 0.0); 16];
        for i in 0..4 {
            for j in 0..4 {
                rv[i * 4 + j] = (0..4).map(|k| r[i * 4 + k] * v[k * 4 + j]).sum();
            }
        }
        let mut out: M4 = [C64::new(0.0, 0.0); 16];
        for i in 0..4 {
            for j in 0..4 {
                out[i * 4 + j] = (0..4).map(|k| v[k * 4 + i].conj() * rv[k * 4 + j]).sum();
            }
        }
        out
    }

    /// `−S(ρ) − Σ_j ρ̃_jj log2 λ_j`, infinite when ρ has weight on the kernel.
    fn value_from(&self, spec: &SigmaSpectrum, rho_t: &M4) -> f64 {
        let mut acc = self.neg_entropy;
        let mut null_overlap = 0.0;
        for j in 0..4 {
            let w = rho_t[j * 5].re;
            if spec.values[j] <= 0.0 {
                null_overlap += w;
            } else {
                acc -= w * spec.values[j].log2();
            }
        }
        if null_overlap > SUPPORT_OVERLAP_TOL {
            f64::INFINITY
        } else {
            acc
        }
    }

    pub fn sigma(&self, x: &[f64]) -> CMatrix {
        SeparableAnsatz::from_params(x, self.barrier).sigma()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let (weights, terms) = Self::terms(x);
        let spec = self.spectrum(&weights, &terms);
        self.value_from(&spec, &self.rotated_rho(&spec.vectors))
    }

    /// Objective and its analytic gradient.
    ///
    /// `∂f/∂σ = −V (ρ̃ ∘ L) V^H` with `ρ̃ = V^H ρ V` and `L` the first divided
    /// differences of `log2` on the spectrum of `σ_τ`; the chain rule then
    /// runs through the mixing weight, the softmax and the Bloch angles.
    pub fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let (weights, terms) = Self::terms(x);
        let spec = self.spectrum(&weights, &terms);
        let rho_t = self.rotated_rho(&spec.vectors);
        let value = self.value_from(&spec, &rho_t);

        let (v, lam) = (&spec.vectors, &spec.values);
        let mut inner: M4 = [C64::new(0.0, 0.0); 16];
        for i in 0..4 {
            for j in 0..4 {
                inner[i * 4 + j] = rho_t[i * 4 + j] * log2_divided_difference(lam[i], lam[j]);
            }
        }
        // G = −(1 − τ) V inner V^H
        let scale = -(1.0 - self.barrier);
        let mut vi: M4 = [C64::new(0.0, 0.0); 16];
        for i in 0..4 {
            for j in 0..4 {
                vi[i * 4 + j] = (0..4).map(|k| v[i * 4 + k] * inner[k * 4 + j]).sum();
            }
        }
        let mut g: M4 = [C64::new(0.0, 0.0); 16];
        for i in 0..4 {
            for j in 0..4 {
                g[i * 4 + j] = (0..4).map(|k| vi[i * 4 + k] * v[j * 4 + k].conj()).sum::<C64>() * scale;
            }
        }

        let n = terms.len();
        let mut grad = vec![0.0; n * PER_TERM];
        let mut overlaps = vec![0.0; n];
        for (k, term) in terms.iter().enumerate() {
            let vk = &term.vector;
            let gv: [C64; 4] = std::array::from_fn(|i| (0..4).map(|j| g[i * 4 + j] * vk[j]).sum());
            overlaps[k] = vk.iter().zip(&gv).map(|(a, b)| (a.conj() * b).re).sum();
            for (slot, dv) in term.partials().iter().enumerate() {
                let re: f64 = gv.iter().zip(dv).map(|(u, d)| (u.conj() * d).re).sum();
                grad[k * PER_TERM + slot] = 2.0 * weights[k] * re;
            }
        }
        let mean: f64 = weights.iter().zip(&overlaps).map(|(p, o)| p * o).sum();
        for k in 0..n {
            grad[k * PER_TERM + 4] = weights[k] * (overlaps[k] - mean);
        }
        (value, grad)
    }

    /// Random starting point: Bloch vectors uniform on the sphere, logits
    /// near zero.
    pub fn random_start<R: Rng + ?Sized>(terms: usize, rng: &mut R) -> Vec<f64> {
        let mut x = Vec::with_capacity(terms * PER_TERM);
        for _ in 0..terms {
            for _ in 0..2 {
                let u: f64 = rng.random();
                x.push((1.0 - 2.0 * u).clamp(-1.0, 1.0).acos());
                x.push(2.0 * PI * rng.random::<f64>());
            }
            x.push(0.1 * (rng.random::<f64>() - 0.5));
        }
        x
    }
}

/// `(log2 a − log2 b) / (a − b)`, with limit `1 / (b ln 2)` at `a = b`.
fn log2_divided_difference(a: f64, b: f64) -> f64 {
    let d = a - b;
    if d == 0.0 {
        return 1.0 / (b * LN_2);
    }
    let r = d / b;
    if r.abs() < 1e-3 {
        (r.ln_1p() / d) / LN_2
    } else {
        (a.ln() - b.ln()) / (d * LN_2)
    }
}

impl DescentProblem for AnsatzObjective {
    type Point = Vec<f64>;

    fn value(&self, p: &Vec<f64>) -> f64 {
        AnsatzObjective::value(self, p)
    }

    fn value_and_gradient(&self, p: &Vec<f64>) -> (f64, Vec<f64>) {
        AnsatzObjective::value_and_gradient(self, p)
    }

    fn retract(&self, p: &Vec<f64>, direction: &[f64], t: f64) -> Vec<f64> {
        euclidean_step(p, direction, t)
    }
}

struct RestartResult {
    value: f64,
    point: Vec<f64>,
    iterations: usize,
    gradient_norm: f64,
    converged: bool,
}

fn run_restart(base: &AnsatzObjective, cfg: &OptimizerConfig, index: usize) -> RestartResult {
    let mut rng = cfg.seed.child(index as u64).rng();
    let mut x = AnsatzObjective::random_start(cfg.terms, &mut rng);
    let mut remaining = cfg.max_iterations;
    let mut total = 0;
    let mut last = None;
    let phases = BARRIER_SCHEDULE.len();
    for (i, &tau) in BARRIER_SCHEDULE.iter().enumerate() {
        let phase_budget = remaining.div_ceil(phases - i).max(1);
        // the barrier biases the optimum by O(τ); resolving a phase much
        // further than that is wasted work
        let settings = DescentSettings {
            max_iterations: phase_budget,
            initial_step: cfg.initial_step,
            gradient_tol: cfg.gradient_tol.max(1e-2 * tau),
            value_tol: cfg.value_tol.max(1e-3 * tau),
        };
        let out = minimize(&base.with_barrier(tau), x, &settings);
        remaining = remaining.saturating_sub(out.iterations);
        total += out.iterations;
        x = out.point.clone();
        last = Some(out);
    }
    let out = last.expect("schedule is non-empty");
    RestartResult {
        value: out.value,
        point: x,
        iterations: total,
        gradient_norm: out.gradient_norm,
        converged: out.converged,
    }
}

/// Upper bound on `E_R(ρ)` from the best of `cfg.restarts` descents, with
/// the ansatz that attains it.
pub fn relative_entropy_entanglement(
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
) -> Result<(MeasureValue, SeparableAnsatz)> {
    cfg.check()?;
    let base = AnsatzObjective::new(rho, BARRIER_SCHEDULE[0])?;
    let results: Vec<RestartResult> = (0..cfg.restarts).into_par_iter().map(|i| run_restart(&base, cfg, i)).collect();
    let iterations = results.iter().map(|r| r.iterations).sum();
    let best = results
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one restart");
    let tau = *BARRIER_SCHEDULE.last().unwrap();
    let ansatz = SeparableAnsatz::from_params(&best.point, tau);
    let value = MeasureValue {
        measure: MeasureId::RelativeEntropyPPT,
        value: best.value.max(0.0),
        status: Status::UpperBound,
        diagnostics: Diagnostics {
            restarts: cfg.restarts,
            iterations,
            best_gradient_norm: best.gradient_norm,
            converged: best.converged,
        },
    };
    Ok((value, ansatz))
}

/// `E_R` reported as an upper bound on the distillable entanglement.
pub fn distillable_upper_bound(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<MeasureValue> {
    relative_entropy_entanglement(rho, cfg).map(|(v, _)| v)
}
