//! Whether two measures rank states the same way, and constructive proof
//! when they do not.
//!
//! Two measures generate the same order when `E₁(a) ≤ E₁(b) ⇔ E₂(a) ≤ E₂(b)`
//! for all pairs. Numerically a pair is only informative if both measures
//! separate it by more than a margin, so comparisons have three outcomes:
//! agreement, violation, tie.

mod relation;
mod sandwich;
mod scan;
mod search;

pub use relation::{same_order, same_order_with, OrderingReport, Outcome, PairOutcome, StateRef, ViolationWitness};
pub use sandwich::{
    required_gap, sandwich_construct, witness_from_gap, witness_from_values, GapWitness, SandwichDemo,
    CONSTRUCTION_TOL,
};
pub use scan::{parse_grid, scan_family, ScanRow, ScanTable};
pub use search::{random_search, random_search_capped, DEFAULT_DELTA, DEFAULT_PAIR_CAP};
