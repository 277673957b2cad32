//! Monotone gradient descent with step halving.
//!
//! Each iteration tries a step length (the Barzilai–Borwein estimate once
//! two gradients are known, the configured initial step before that) and
//! halves it until the Armijo condition holds.

/// A problem whose iterates may live on a manifold: `retract` moves from a
/// point along `-t * direction`.
pub(crate) trait DescentProblem {
    type Point: Clone;

    fn value(&self, p: &Self::Point) -> f64;
    fn value_and_gradient(&self, p: &Self::Point) -> (f64, Vec<f64>);
    fn retract(&self, p: &Self::Point, direction: &[f64], t: f64) -> Self::Point;
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct DescentSettings {
    pub max_iterations: usize,
    pub initial_step: f64,
    pub gradient_tol: f64,
    pub value_tol: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct DescentOutcome<P> {
    pub point: P,
    pub value: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub converged: bool,
}

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-16;
const MAX_STEP: f64 = 1e4;
/// Consecutive sub-tolerance improvements before declaring convergence.
const STALL_WINDOW: usize = 3;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn minimize<P: DescentProblem>(problem: &P, start: P::Point, cfg: &DescentSettings) -> DescentOutcome<P::Point> {
    let mut point = start;
    let (mut value, mut grad) = problem.value_and_gradient(&point);
    let mut step = cfg.initial_step;
    let mut small = 0;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iterations {
        let gnorm2 = dot(&grad, &grad);
        if !value.is_finite() || gnorm2.sqrt() < cfg.gradient_tol {
            converged = value.is_finite();
            break;
        }
        iterations += 1;

        let mut t = step;
        let accepted = loop {
            let trial = problem.retract(&point, &grad, t);
            let tv = problem.value(&trial);
            if tv <= value - ARMIJO * t * gnorm2 {
                break Some((trial, tv));
            }
            t *= 0.5;
            if t < MIN_STEP {
                break None;
            }
        };
        let Some((next, next_value)) = accepted else {
            // no descent possible at round-off scale
            converged = true;
            break;
        };

        let (nv, next_grad) = problem.value_and_gradient(&next);
        debug_assert!((nv - next_value).abs() <= 1e-12 * (1.0 + nv.abs()));
        let improvement = value - next_value;

        // Barzilai–Borwein: s = -t g, y = g' - g
        let y: Vec<f64> = next_grad.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = -t * dot(&grad, &y);
        let ss = t * t * gnorm2;
        step = if sy > 0.0 { (ss / sy).clamp(MIN_STEP * 1e3, MAX_STEP) } else { (2.0 * t).min(MAX_STEP) };

        point = next;
        value = next_value;
        grad = next_grad;

        if improvement < cfg.value_tol {
            small += 1;
            if small >= STALL_WINDOW {
                converged = true;
                break;
            }
        } else {
            small = 0;
        }
    }

    DescentOutcome { point, value, iterations, gradient_norm: dot(&grad, &grad).sqrt(), converged }
}

/// Plain Euclidean parameter vector.
pub(crate) fn euclidean_step(x: &[f64], direction: &[f64], t: f64) -> Vec<f64> {
    x.iter().zip(direction).map(|(a, d)| a - t * d).collect()
}
