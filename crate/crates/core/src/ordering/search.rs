//! Bulk same-order experiments over sampled states.

use rand::seq::index;
use rayon::prelude::*;

use super::relation::{same_order_with, Outcome, OrderingReport, StateRef, ViolationWitness};
use super::sandwich::witness_from_values;
use crate::error::{Error, Result};
use crate::measures::{evaluate, MeasureId, OptimizerConfig};
use crate::rng::SeedSpec;
use crate::states::{FamilySpec, State};

/// Default margin for ordering comparisons.
pub const DEFAULT_DELTA: f64 = 1e-3;
/// Above this many pairs a seeded random subset of this size is compared.
pub const DEFAULT_PAIR_CAP: usize = 1_000_000;

// Child-seed purposes under the per-state seed `(seed, i)`.
const EVALUATE: u64 = 1;
const VERIFY: u64 = 2;
const WITNESS: u64 = 3;
const PAIR_SUBSET: u64 = u64::MAX;

fn state_seed(seed: u64, i: usize, purpose: u64) -> SeedSpec {
    SeedSpec::new(seed, i as u64).child(purpose)
}

fn evaluate_pair(measures: [MeasureId; 2], state: &State, cfg: &OptimizerConfig) -> Result<(f64, f64)> {
    Ok((evaluate(measures[0], state, cfg)?.value, evaluate(measures[1], state, cfg)?.value))
}

/// `k`-th pair `(i, j)`, `i < j`, in row-major order over the upper triangle.
fn decode_pair(k: usize, n: usize) -> (usize, usize) {
    let row_start = |i: usize| i * n - i * (i + 1) / 2;
    // invariant: row_start(lo) <= k < row_start(hi)
    let (mut lo, mut hi) = (0, n - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if row_start(mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, lo + 1 + (k - row_start(lo)))
}

fn pair_subset(n: usize, cap: usize, seed: u64) -> Option<Vec<(usize, usize)>> {
    let total = n * (n - 1) / 2;
    if total <= cap {
        return None;
    }
    let mut rng = SeedSpec::new(seed, PAIR_SUBSET).rng();
    let mut picked = index::sample(&mut rng, total, cap).into_vec();
    picked.sort_unstable();
    Some(picked.into_iter().map(|k| decode_pair(k, n)).collect())
}

/// [`random_search_capped`] with [`DEFAULT_PAIR_CAP`].
pub fn random_search(
    n: usize,
    sampler: &FamilySpec,
    measures: [MeasureId; 2],
    cfg: &OptimizerConfig,
    delta: f64,
    seed: u64,
) -> Result<OrderingReport> {
    random_search_capped(n, sampler, measures, cfg, delta, seed, DEFAULT_PAIR_CAP)
}

/// Samples `n` states from `sampler` (state `i` uses stream `i` of `seed`),
/// evaluates both measures on each and runs the same-order check.
///
/// A pair counts as a violation only if both margins exceed `delta` plus
/// that measure's evaluation tolerance, and still do after both states are
/// re-evaluated with fresh optimizer seeds; pairs that fail the re-check
/// are counted as ties. Every sampled state also goes through
/// [`witness_from_gap`](super::witness_from_gap), whose results are listed
/// under `witnesses`. Optimizer seeds derive from `seed`, not `cfg.seed`.
pub fn random_search_capped(
    n: usize,
    sampler: &FamilySpec,
    measures: [MeasureId; 2],
    cfg: &OptimizerConfig,
    delta: f64,
    seed: u64,
    pair_cap: usize,
) -> Result<OrderingReport> {
    if n < 2 {
        return Err(Error::Domain(format!("a search needs at least 2 samples, got {n}")));
    }
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!("margin delta must be nonnegative, got {delta}")));
    }
    if pair_cap == 0 {
        return Err(Error::Domain("pair cap must be at least 1".into()));
    }
    cfg.check()?;

    let specs: Vec<FamilySpec> = (0..n).map(|i| sampler.seeded(seed, i as u64)).collect();
    let states: Vec<State> = specs.par_iter().map(FamilySpec::build).collect::<Result<_>>()?;
    let values: Vec<(f64, f64)> = states
        .par_iter()
        .enumerate()
        .map(|(i, s)| evaluate_pair(measures, s, &cfg.with_seed(state_seed(seed, i, EVALUATE))))
        .collect::<Result<_>>()?;

    let e1: Vec<f64> = values.iter().map(|v| v.0).collect();
    let e2: Vec<f64> = values.iter().map(|v| v.1).collect();
    let deltas = [delta + measures[0].tolerance(), delta + measures[1].tolerance()];
    let mut report = same_order_with(measures, &e1, &e2, deltas, delta, pair_subset(n, pair_cap, seed))?;

    // re-check every violation against fresh evaluations
    let mut involved: Vec<usize> = report
        .violations
        .iter()
        .flat_map(|w| [&w.state_a, &w.state_b])
        .filter_map(|r| match r {
            StateRef::Index(i) => Some(*i),
            _ => None,
        })
        .collect();
    involved.sort_unstable();
    involved.dedup();
    let fresh: Vec<(usize, (f64, f64))> = involved
        .par_iter()
        .map(|&i| Ok((i, evaluate_pair(measures, &states[i], &cfg.with_seed(state_seed(seed, i, VERIFY)))?)))
        .collect::<Result<_>>()?;
    let fresh: std::collections::HashMap<usize, (f64, f64)> = fresh.into_iter().collect();

    let index_of = |r: &StateRef| match r {
        StateRef::Index(i) => *i,
        _ => unreachable!("same_order reports indices"),
    };
    let mut kept = Vec::with_capacity(report.violations.len());
    let mut rejected = std::collections::HashSet::new();
    for w in report.violations.drain(..) {
        let (a, b) = (index_of(&w.state_a), index_of(&w.state_b));
        let (fa, fb) = (fresh[&a], fresh[&b]);
        let recheck = ViolationWitness::new(w.state_a.clone(), w.state_b.clone(), [fa.0, fb.0], [fa.1, fb.1]);
        if recheck.holds_with(deltas) {
            kept.push(ViolationWitness { state_a: StateRef::Family(specs[a].clone()), state_b: StateRef::Family(specs[b].clone()), ..w });
        } else {
            rejected.insert((a.min(b), a.max(b)));
        }
    }
    for p in report.pairs.iter_mut() {
        if p.outcome == Outcome::Violation && rejected.contains(&(p.i, p.j)) {
            p.outcome = Outcome::Tie;
            report.ties += 1;
        }
    }
    report.violations = kept;

    let witnesses: Vec<Option<ViolationWitness>> = states
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let c = cfg.with_seed(state_seed(seed, i, WITNESS));
            let found = witness_from_values(
                &s.density(),
                StateRef::Family(specs[i].clone()),
                [values[i].0, values[i].1],
                measures,
                &c,
                delta,
            )?;
            Ok(found.map(|g| g.witness))
        })
        .collect::<Result<_>>()?;
    report.witnesses = witnesses.into_iter().flatten().collect();
    report.references = specs.into_iter().map(StateRef::Family).collect();
    Ok(report)
}
