//! The same-order relation between two measures on a list of states.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::MeasureId;
use crate::states::{FamilySpec, StateFile};

/// How a state is named in reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum StateRef {
    /// Position in the caller's value lists.
    Index(usize),
    /// A family or sampler spec string that rebuilds the state exactly.
    Family(FamilySpec),
    /// A state file path as given by the user.
    File(String),
    Inline(StateFile),
}

impl std::fmt::Display for StateRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateRef::Index(i) => write!(f, "#{i}"),
            StateRef::Family(s) => write!(f, "{s}"),
            StateRef::File(p) => f.write_str(p),
            StateRef::Inline(s) => f.write_str(&serde_json::to_string(s).map_err(|_| std::fmt::Error)?),
        }
    }
}

/// A pair of states ranked oppositely: `E₁(a) < E₁(b)` while `E₂(a) > E₂(b)`.
///
/// `e1 = [E₁(a), E₁(b)]`, `e2 = [E₂(a), E₂(b)]`, and
/// `margins = [E₁(b) − E₁(a), E₂(a) − E₂(b)]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViolationWitness {
    #[serde(rename = "a")]
    pub state_a: StateRef,
    #[serde(rename = "b")]
    pub state_b: StateRef,
    pub e1: [f64; 2],
    pub e2: [f64; 2],
    pub margins: [f64; 2],
}

impl ViolationWitness {
    pub fn new(state_a: StateRef, state_b: StateRef, e1: [f64; 2], e2: [f64; 2]) -> Self {
        Self { state_a, state_b, e1, e2, margins: [e1[1] - e1[0], e2[0] - e2[1]] }
    }

    /// Both margins strictly above `delta`.
    pub fn holds(&self, delta: f64) -> bool {
        self.holds_with([delta, delta])
    }

    pub fn holds_with(&self, deltas: [f64; 2]) -> bool {
        self.margins[0] > deltas[0] && self.margins[1] > deltas[1]
    }

    /// The same violation seen with the measures in the other order.
    pub fn swapped(&self) -> Self {
        Self::new(self.state_b.clone(), self.state_a.clone(), [self.e2[1], self.e2[0]], [self.e1[1], self.e1[0]])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Agreement,
    Tie,
    Violation,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Agreement => "agreement",
            Outcome::Tie => "tie",
            Outcome::Violation => "violation",
        }
    }
}

/// One compared pair, `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairOutcome {
    pub i: usize,
    pub j: usize,
    pub outcome: Outcome,
}

/// Tally of a same-order comparison.
///
/// `agreements + ties + violations.len() == pairs.len()`. Witnesses built
/// against a constructed pure state (see
/// [`witness_from_gap`](super::witness_from_gap)) are listed separately in
/// `witnesses` and do not enter the tally.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderingReport {
    pub measures: [MeasureId; 2],
    pub n: usize,
    pub delta: f64,
    #[serde(rename = "pairs", serialize_with = "count")]
    pub pairs: Vec<PairOutcome>,
    pub agreements: usize,
    pub ties: usize,
    pub violations: Vec<ViolationWitness>,
    pub witnesses: Vec<ViolationWitness>,
    /// Per-state values `(E₁, E₂)` in input order.
    #[serde(skip)]
    pub values: Vec<(f64, f64)>,
    #[serde(skip)]
    pub references: Vec<StateRef>,
}

fn count<S: serde::Serializer>(pairs: &[PairOutcome], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(pairs.len() as u64)
}

impl OrderingReport {
    pub fn compared(&self) -> usize {
        self.pairs.len()
    }

    /// CSV with one row per compared pair.
    pub fn to_csv(&self) -> String {
        let (m1, m2) = (self.measures[0], self.measures[1]);
        let mut out = format!("i,j,a,b,{m1}_a,{m1}_b,{m2}_a,{m2}_b,outcome\n");
        for p in &self.pairs {
            let (a, b) = (&self.values[p.i], &self.values[p.j]);
            out.push_str(&format!(
                "{},{},{},{},{:?},{:?},{:?},{:?},{}\n",
                p.i,
                p.j,
                csv_field(&self.references[p.i].to_string()),
                csv_field(&self.references[p.j].to_string()),
                a.0,
                b.0,
                a.1,
                b.1,
                p.outcome.as_str()
            ));
        }
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Classifies one ordered pair `(i, j)`; a violation is oriented so that
/// `a` has the smaller `E₁`.
fn classify(e1: &[f64], e2: &[f64], i: usize, j: usize, deltas: [f64; 2]) -> (Outcome, Option<(usize, usize)>) {
    let d1 = e1[j] - e1[i];
    let d2 = e2[j] - e2[i];
    if d1.abs() <= deltas[0] || d2.abs() <= deltas[1] {
        (Outcome::Tie, None)
    } else if (d1 > 0.0) == (d2 > 0.0) {
        (Outcome::Agreement, None)
    } else if d1 > 0.0 {
        (Outcome::Violation, Some((i, j)))
    } else {
        (Outcome::Violation, Some((j, i)))
    }
}

/// Same-order check over all pairs with one margin for both measures.
///
/// A pair is a tie when either measure separates it by at most `delta`,
/// otherwise an agreement or a violation.
pub fn same_order(measures: [MeasureId; 2], e1: &[f64], e2: &[f64], delta: f64) -> Result<OrderingReport> {
    same_order_with(measures, e1, e2, [delta, delta], delta, None)
}

/// Same-order check with per-measure margins over `pairs` (all pairs when
/// `None`). `delta` is recorded in the report as the nominal margin.
pub fn same_order_with(
    measures: [MeasureId; 2],
    e1: &[f64],
    e2: &[f64],
    deltas: [f64; 2],
    delta: f64,
    pairs: Option<Vec<(usize, usize)>>,
) -> Result<OrderingReport> {
    if e1.len() != e2.len() {
        return Err(Error::LengthMismatch { left: e1.len(), right: e2.len() });
    }
    if !(deltas[0] >= 0.0 && deltas[1] >= 0.0) {
        return Err(Error::Domain(format!("ordering margin must be nonnegative, got {deltas:?}")));
    }
    let n = e1.len();
    let pairs = pairs.unwrap_or_else(|| (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect());
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= j || j >= n) {
        return Err(Error::Domain(format!("pair ({i}, {j}) is not an ordered pair of indices below {n}")));
    }

    let classified: Vec<_> = pairs.par_iter().map(|&(i, j)| (i, j, classify(e1, e2, i, j, deltas))).collect();
    let mut out = Vec::with_capacity(classified.len());
    let mut violations = Vec::new();
    let (mut agreements, mut ties) = (0, 0);
    for (i, j, (outcome, oriented)) in classified {
        match outcome {
            Outcome::Agreement => agreements += 1,
            Outcome::Tie => ties += 1,
            Outcome::Violation => {
                let (a, b) = oriented.expect("violations are oriented");
                violations.push(ViolationWitness::new(
                    StateRef::Index(a),
                    StateRef::Index(b),
                    [e1[a], e1[b]],
                    [e2[a], e2[b]],
                ));
            }
        }
        out.push(PairOutcome { i, j, outcome });
    }

    Ok(OrderingReport {
        measures,
        n,
        delta,
        pairs: out,
        agreements,
        ties,
        violations,
        witnesses: Vec::new(),
        values: e1.iter().copied().zip(e2.iter().copied()).collect(),
        references: (0..n).map(StateRef::Index).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDS: [MeasureId; 2] = [MeasureId::FormationClosedForm, MeasureId::RelativeEntropyPPT];

    #[test]
    fn same_direction_is_agreement() {
        let r = same_order(IDS, &[0.1, 0.2], &[0.3, 0.4], 1e-3).unwrap();
        assert_eq!((r.agreements, r.ties, r.violations.len()), (1, 0, 0));
    }

    #[test]
    fn flipped_pair_is_violation_with_margins() {
        let r = same_order(IDS, &[0.1, 0.2], &[0.4, 0.3], 1e-3).unwrap();
        assert_eq!(r.violations.len(), 1);
        let w = &r.violations[0];
        assert_eq!((w.state_a.clone(), w.state_b.clone()), (StateRef::Index(0), StateRef::Index(1)));
        assert!((w.margins[0] - 0.1).abs() < 1e-15 && (w.margins[1] - 0.1).abs() < 1e-15);
        assert!(w.holds(1e-3));
    }

    #[test]
    fn values_inside_margin_tie() {
        let r = same_order(IDS, &[0.1, 0.1 + 1e-6], &[0.9, 0.2], 1e-3).unwrap();
        assert_eq!((r.agreements, r.ties, r.violations.len()), (0, 1, 0));
    }

    #[test]
    fn swapping_measures_swaps_margins() {
        let e1 = [0.1, 0.5, 0.3, 0.35];
        let e2 = [0.4, 0.2, 0.3, 0.1];
        let fwd = same_order(IDS, &e1, &e2, 1e-3).unwrap();
        let rev = same_order([IDS[1], IDS[0]], &e2, &e1, 1e-3).unwrap();
        assert_eq!(fwd.violations.len(), rev.violations.len());
        for (f, r) in fwd.violations.iter().zip(&rev.violations) {
            assert_eq!(&f.swapped(), r);
        }
        assert_eq!(fwd.agreements + fwd.ties + fwd.violations.len(), fwd.compared());
    }

    #[test]
    fn unequal_lengths_rejected() {
        assert!(matches!(same_order(IDS, &[0.1], &[0.1, 0.2], 0.0), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn report_json_shape() {
        let r = same_order(IDS, &[0.1, 0.2], &[0.4, 0.3], 1e-3).unwrap();
        let js = serde_json::to_value(&r).unwrap();
        assert_eq!(js["measures"], serde_json::json!(["eof", "rel_ent"]));
        assert_eq!(js["n"], 2);
        assert_eq!(js["pairs"], 1);
        assert_eq!(js["violations"][0]["a"], 0);
        assert!(js["violations"][0]["margins"].is_array());
        assert!(r.to_csv().lines().nth(1).unwrap().ends_with(",violation"));
    }
}
