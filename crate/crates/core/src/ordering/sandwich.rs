//! Pure states pinching a mixed state's value, and the witnesses they yield.
//!
//! Two measures that agree on pure states but disagree on `ρ` by a gap `g`
//! cannot order states the same way: a pure `χ` whose entanglement sits
//! strictly between `E₁(ρ)` and `E₂(ρ)` is ranked above `ρ` by one measure
//! and below it by the other.

use serde::Serialize;

use super::relation::{StateRef, ViolationWitness};
use crate::error::{Error, Result};
use crate::measures::{entropy_of_entanglement, eof_closed_form, evaluate, MeasureId, OptimizerConfig};
use crate::states::{invert_binary_entropy, pure_with_schmidt, require_two_qubits, DensityMatrix, FamilySpec, PureState, State};

/// Agreement required between a constructed pure state's entanglement and
/// its target.
pub const CONSTRUCTION_TOL: f64 = 1e-9;

// Child-seed indices for from-scratch re-evaluation; far above any restart
// index so the streams never coincide with the first evaluation's.
const RECHECK_RHO: u64 = 1 << 32;
const RECHECK_CHI: u64 = (1 << 32) + 1;

fn schmidt_state(entropy: f64) -> Result<(f64, PureState)> {
    let p = invert_binary_entropy(entropy)?;
    let psi = pure_with_schmidt(p)?;
    let got = entropy_of_entanglement(&psi)?.value;
    if (got - entropy).abs() > CONSTRUCTION_TOL {
        return Err(Error::Domain(format!("pure state at E = {entropy} came out at {got}")));
    }
    Ok((p, psi))
}

/// Pure states `φ`, `ψ` with `E(φ) = E_F(ρ) + ε` and `E(ψ) = E_F(ρ) − ε`.
pub fn sandwich_construct(rho: &DensityMatrix, epsilon: f64) -> Result<(PureState, PureState)> {
    let (_, phi, _, psi) = sandwich_parts(rho, epsilon)?;
    Ok((phi, psi))
}

fn sandwich_parts(rho: &DensityMatrix, epsilon: f64) -> Result<(f64, PureState, f64, PureState)> {
    let ef = eof_closed_form(rho)?.value;
    let max = ef.min(1.0 - ef).max(0.0);
    if !(epsilon > 0.0 && epsilon < max) {
        return Err(Error::EpsilonTooLarge { epsilon, max });
    }
    let (p_phi, phi) = schmidt_state(ef + epsilon)?;
    let (p_psi, psi) = schmidt_state(ef - epsilon)?;
    Ok((p_phi, phi, p_psi, psi))
}

/// The sandwich chain `E(φ) ≥ E(ρ) ≥ E(ψ)` evaluated for two measures.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichDemo {
    pub rho: StateRef,
    pub epsilon: f64,
    pub phi: StateRef,
    pub psi: StateRef,
    pub measures: [MeasureId; 2],
    /// `values[m] = [E_m(φ), E_m(ρ), E_m(ψ)]`.
    pub values: [[f64; 3]; 2],
    /// `chain_holds[m] = [E_m(φ) ≥ E_m(ρ), E_m(ρ) ≥ E_m(ψ)]`.
    pub chain_holds: [[bool; 2]; 2],
}

impl SandwichDemo {
    pub fn new(
        rho: &DensityMatrix,
        reference: StateRef,
        epsilon: f64,
        measures: [MeasureId; 2],
        cfg: &OptimizerConfig,
    ) -> Result<Self> {
        let (p_phi, phi, p_psi, psi) = sandwich_parts(rho, epsilon)?;
        let states = [State::Pure(phi), State::Mixed(rho.clone()), State::Pure(psi)];
        let mut values = [[0.0; 3]; 2];
        for (m, id) in measures.iter().enumerate() {
            for (k, s) in states.iter().enumerate() {
                let seed = cfg.seed.child((3 * m + k) as u64 + RECHECK_CHI + 1);
                values[m][k] = evaluate(*id, s, &cfg.with_seed(seed))?.value;
            }
        }
        let chain = |v: [f64; 3]| [v[0] >= v[1], v[1] >= v[2]];
        Ok(Self {
            rho: reference,
            epsilon,
            phi: StateRef::Family(FamilySpec::Schmidt(p_phi)),
            psi: StateRef::Family(FamilySpec::Schmidt(p_psi)),
            measures,
            values,
            chain_holds: [chain(values[0]), chain(values[1])],
        })
    }
}

/// A violation between `ρ` and a pure state `χ` built at the midpoint of
/// the two measure values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapWitness {
    pub witness: ViolationWitness,
    /// `χ = √p |00> + √(1 − p) |11>`.
    pub schmidt_weight: f64,
    /// `E(χ)`.
    pub target: f64,
    /// `E₁(ρ) − E₂(ρ)` from the first evaluation.
    pub gap: f64,
}

/// Gap a witness needs: twice the margin plus both evaluation slacks.
pub fn required_gap(measures: [MeasureId; 2], delta: f64) -> f64 {
    2.0 * delta + measures[0].tolerance() + measures[1].tolerance()
}

/// Evaluates both measures on `ρ` and, if their gap exceeds
/// [`required_gap`], returns a witness pairing `ρ` with a pure state at the
/// midpoint. Both measures are re-evaluated from scratch on both states
/// before the witness is returned; `None` when the gap is too small or the
/// re-evaluated margins do not exceed `delta`.
pub fn witness_from_gap(
    rho: &DensityMatrix,
    measures: [MeasureId; 2],
    cfg: &OptimizerConfig,
    delta: f64,
) -> Result<Option<GapWitness>> {
    let state = State::Mixed(rho.clone());
    let v1 = evaluate(measures[0], &state, cfg)?.value;
    let v2 = evaluate(measures[1], &state, cfg)?.value;
    let reference = StateRef::Inline(crate::states::StateFile::from_state(&state));
    witness_from_values(rho, reference, [v1, v2], measures, cfg, delta)
}

/// [`witness_from_gap`] with the first evaluation already done.
pub fn witness_from_values(
    rho: &DensityMatrix,
    reference: StateRef,
    values: [f64; 2],
    measures: [MeasureId; 2],
    cfg: &OptimizerConfig,
    delta: f64,
) -> Result<Option<GapWitness>> {
    require_two_qubits(rho.dims(), "witness construction")?;
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!("margin delta must be nonnegative, got {delta}")));
    }
    let gap = values[0] - values[1];
    if gap.abs() <= required_gap(measures, delta) {
        return Ok(None);
    }
    let target = (0.5 * (values[0] + values[1])).clamp(0.0, 1.0);
    let (p, chi) = schmidt_state(target)?;

    let fresh = |s: &State, child: u64| -> Result<[f64; 2]> {
        let c = cfg.with_seed(cfg.seed.child(child));
        Ok([evaluate(measures[0], s, &c)?.value, evaluate(measures[1], s, &c)?.value])
    };
    let r = fresh(&State::Mixed(rho.clone()), RECHECK_RHO)?;
    let x = fresh(&State::Pure(chi), RECHECK_CHI)?;
    let chi_ref = StateRef::Family(FamilySpec::Schmidt(p));

    let witness = if gap > 0.0 {
        ViolationWitness::new(chi_ref, reference, [x[0], r[0]], [x[1], r[1]])
    } else {
        ViolationWitness::new(reference, chi_ref, [r[0], x[0]], [r[1], x[1]])
    };
    Ok(witness.holds(delta).then_some(GapWitness { witness, schmidt_weight: p, target, gap }))
}
