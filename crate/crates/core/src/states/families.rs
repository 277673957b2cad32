//! Canonical two-qubit families and the binary entropy function.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use super::{DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Bell basis vectors in the fixed order used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [Self::PhiPlus, Self::PhiMinus, Self::PsiPlus, Self::PsiMinus];

    pub fn vector(self) -> [C64; 4] {
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        let z = C64::new(0.0, 0.0);
        match self {
            Self::PhiPlus => [s, z, z, s],
            Self::PhiMinus => [s, z, z, -s],
            Self::PsiPlus => [z, s, s, z],
            Self::PsiMinus => [z, s, -s, z],
        }
    }

    pub fn state(self) -> PureState {
        PureState { dims: (2, 2), amp: self.vector().to_vec() }
    }
}

/// `(Φ+, Φ−, Ψ+, Ψ−)` as pure states.
pub fn bell_basis() -> [PureState; 4] {
    BellLabel::ALL.map(BellLabel::state)
}

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

/// `F |Φ+><Φ+| + (1 − F)/3 (I − |Φ+><Φ+|)`, entangled iff `F > 1/2`.
pub fn werner(fidelity: f64) -> Result<DensityMatrix> {
    check_unit_interval("Werner fidelity F", fidelity)?;
    let proj = CMatrix::outer(&BellLabel::PhiPlus.vector());
    let rest = &CMatrix::identity(4) - &proj;
    let mat = &proj.scale(fidelity) + &rest.scale((1.0 - fidelity) / 3.0);
    Ok(DensityMatrix::from_trusted(mat.hermitian_part(), (2, 2)))
}

/// `Σ λ_i |B_i><B_i|` over the Bell basis `(Φ+, Φ−, Ψ+, Ψ−)`.
pub fn bell_diagonal(weights: [f64; 4]) -> Result<DensityMatrix> {
    if weights.iter().any(|&l| !(l >= 0.0)) {
        return Err(Error::Domain(format!("Bell-diagonal weights {weights:?} must be nonnegative")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("Bell-diagonal weights sum to {total}, not 1")));
    }
    let mut mat = CMatrix::zeros(4, 4);
    for (label, &w) in BellLabel::ALL.iter().zip(&weights) {
        mat = &mat + &CMatrix::outer(&label.vector()).scale(w);
    }
    Ok(DensityMatrix::from_trusted(mat, (2, 2)))
}

/// `√p |00> + √(1 − p) |11>`.
pub fn pure_with_schmidt(p: f64) -> Result<PureState> {
    check_unit_interval("Schmidt weight p", p)?;
    let z = C64::new(0.0, 0.0);
    let amp = vec![C64::new(p.sqrt(), 0.0), z, z, C64::new((1.0 - p).sqrt(), 0.0)];
    PureState::normalized((2, 2), amp)
}

/// `h(p) = −p log2 p − (1 − p) log2 (1 − p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_unit_interval("probability p", p)?;
    Ok(binary_entropy_unchecked(p))
}

pub(crate) fn binary_entropy_unchecked(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// The `p ∈ [0, 1/2]` branch of `h⁻¹`, by bisection to `|h(p) − E| < 1e−12`.
pub fn invert_binary_entropy(entropy: f64) -> Result<f64> {
    check_unit_interval("binary entropy E", entropy)?;
    if entropy == 0.0 {
        return Ok(0.0);
    }
    if entropy == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    let mut mid = 0.25;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let h = binary_entropy_unchecked(mid);
        if (h - entropy).abs() < 1e-12 || hi - lo < f64::EPSILON * 0.25 {
            break;
        }
        if h < entropy {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}
