//! Entanglement measures in ebits.
//!
//! All measures here agree with the entropy of entanglement on pure states.
//! Mixed two-qubit states get the entanglement of formation in closed form
//! (through the concurrence), an independent decomposition search for it,
//! and the relative entropy of entanglement by descent over separable
//! ansatz states.

mod decomposition;
mod descent;
mod formation;
mod relative;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use decomposition::{eof_decomposition_search, Ensemble, ENSEMBLE_SIZE};
pub use formation::{concurrence, entropy_of_entanglement, eof_closed_form, eof_from_concurrence};
pub use relative::{
    distillable_upper_bound, relative_entropy_entanglement, AnsatzObjective,
    BlochAngles, SeparableAnsatz, BARRIER_SCHEDULE,
};

use crate::error::{Error, Result};
use crate::rng::SeedSpec;
use crate::states::State;

/// Slack allowed for measures computed in closed form.
pub const EXACT_TOL: f64 = 1e-9;
/// Slack allowed for measures computed by a non-convex optimizer.
pub const OPTIMIZER_TOL: f64 = 5e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureId {
    #[serde(rename = "entropy")]
    EntropyOfEntanglement,
    #[serde(rename = "eof")]
    FormationClosedForm,
    #[serde(rename = "eof_search")]
    FormationSearch,
    #[serde(rename = "rel_ent")]
    RelativeEntropyPPT,
}

impl MeasureId {
    pub const ALL: [MeasureId; 4] = [
        Self::EntropyOfEntanglement,
        Self::FormationClosedForm,
        Self::FormationSearch,
        Self::RelativeEntropyPPT,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Self::EntropyOfEntanglement => "entropy",
            Self::FormationClosedForm => "eof",
            Self::FormationSearch => "eof_search",
            Self::RelativeEntropyPPT => "rel_ent",
        }
    }

    pub fn status(self) -> Status {
        match self {
            Self::EntropyOfEntanglement | Self::FormationClosedForm => Status::Exact,
            Self::FormationSearch | Self::RelativeEntropyPPT => Status::UpperBound,
        }
    }

    /// Evaluation slack: how far a returned value may sit from the true one.
    pub fn tolerance(self) -> f64 {
        match self.status() {
            Status::Exact => EXACT_TOL,
            Status::UpperBound => OPTIMIZER_TOL,
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "entropy" | "eoe" | "EntropyOfEntanglement" => Ok(Self::EntropyOfEntanglement),
            "eof" | "FormationClosedForm" => Ok(Self::FormationClosedForm),
            "eof_search" | "FormationSearch" => Ok(Self::FormationSearch),
            "rel_ent" | "rer" | "RelativeEntropyPPT" => Ok(Self::RelativeEntropyPPT),
            other => Err(Error::Parse(format!(
                "unknown measure '{other}' (expected entropy, eof, eof_search, rel_ent)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exact,
    UpperBound,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub restarts: usize,
    pub iterations: usize,
    pub best_gradient_norm: f64,
    pub converged: bool,
}

impl Diagnostics {
    fn exact() -> Self {
        Self { restarts: 0, iterations: 0, best_gradient_norm: 0.0, converged: true }
    }
}

/// An entanglement value together with how it was obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureValue {
    pub measure: MeasureId,
    pub value: f64,
    pub status: Status,
    pub diagnostics: Diagnostics,
}

impl MeasureValue {
    pub(crate) fn exact(measure: MeasureId, value: f64) -> Self {
        Self { measure, value, status: Status::Exact, diagnostics: Diagnostics::exact() }
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureValueRepr {
    measure: MeasureId,
    value: f64,
    status: Status,
    converged: bool,
    iterations: usize,
    restarts: usize,
}

impl Serialize for MeasureValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeasureValueRepr {
            measure: self.measure,
            value: self.value,
            status: self.status,
            converged: self.diagnostics.converged,
            iterations: self.diagnostics.iterations,
            restarts: self.diagnostics.restarts,
        }
        .serialize(s)
    }
}

fn default_terms() -> usize {
    16
}
fn default_restarts() -> usize {
    8
}
fn default_max_iterations() -> usize {
    2000
}
fn default_initial_step() -> f64 {
    0.1
}
fn default_gradient_tol() -> f64 {
    1e-7
}
fn default_value_tol() -> f64 {
    1e-9
}

/// Settings shared by the two optimizers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Product terms in the separable ansatz.
    #[serde(default = "default_terms")]
    pub terms: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    /// Iteration budget per restart.
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "default_initial_step")]
    pub initial_step: f64,
    #[serde(default = "default_gradient_tol")]
    pub gradient_tol: f64,
    #[serde(default = "default_value_tol")]
    pub value_tol: f64,
    #[serde(default)]
    pub seed: SeedSpec,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            terms: default_terms(),
            restarts: default_restarts(),
            max_iterations: default_max_iterations(),
            initial_step: default_initial_step(),
            gradient_tol: default_gradient_tol(),
            value_tol: default_value_tol(),
            seed: SeedSpec::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(self, seed: SeedSpec) -> Self {
        Self { seed, ..self }
    }

    pub fn check(&self) -> Result<()> {
        if self.terms == 0 || self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::Domain("optimizer counts must all be at least 1".into()));
        }
        if !(self.initial_step > 0.0) || !(self.gradient_tol > 0.0) || !(self.value_tol > 0.0) {
            return Err(Error::Domain("optimizer step and tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Evaluates `id` on `state`.
pub fn evaluate(id: MeasureId, state: &State, cfg: &OptimizerConfig) -> Result<MeasureValue> {
    match (id, state) {
        (MeasureId::EntropyOfEntanglement, State::Pure(p)) => entropy_of_entanglement(p),
        (MeasureId::EntropyOfEntanglement, State::Mixed(_)) => Err(Error::IncompatibleMeasure {
            measure: id.to_string(),
            state: "a mixed state (entropy of entanglement needs a pure state)".into(),
        }),
        (MeasureId::FormationClosedForm, s) => eof_closed_form(&s.density()),
        (MeasureId::FormationSearch, s) => eof_decomposition_search(&s.density(), cfg).map(|(v, _)| v),
        (MeasureId::RelativeEntropyPPT, s) => relative_entropy_entanglement(&s.density(), cfg).map(|(v, _)| v),
    }
}
