use serde::Serialize;

use super::DensityMatrix;
use crate::linalg::{hermitian_eig, partial_transpose, Subsystem};

/// A state is PPT when the partial transpose has no eigenvalue below `-PPT_TOL`.
pub const PPT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PptResult {
    pub ppt: bool,
    pub min_eigenvalue: f64,
}

/// Peres–Horodecki test on `ρ^{T_B}`; decides separability for 2x2 and 2x3.
pub fn is_ppt(rho: &DensityMatrix) -> PptResult {
    let pt = partial_transpose(rho.matrix(), rho.dims(), Subsystem::B).expect("dims checked");
    let min = hermitian_eig(&pt).expect("partial transpose is Hermitian").min_value();
    PptResult { ppt: min >= -PPT_TOL, min_eigenvalue: min }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{werner, BellLabel};

    #[test]
    fn bell_state_is_npt() {
        let r = is_ppt(&BellLabel::PhiPlus.state().density());
        assert!(!r.ppt);
        assert!((r.min_eigenvalue + 0.5).abs() < 1e-12);
    }

    #[test]
    fn werner_three_quarters_is_npt() {
        // PT spectrum of a Bell-diagonal state with weights λ is 1/2 − λ_i;
        // for λ_max = 3/4 the minimum is −1/4.
        let r = is_ppt(&werner(0.75).unwrap());
        assert!(!r.ppt);
        assert!((r.min_eigenvalue + 0.25).abs() < 1e-12);
    }

    #[test]
    fn werner_threshold_on_grid() {
        for k in 0..=100 {
            let f = k as f64 / 100.0;
            let entangled = !is_ppt(&werner(f).unwrap()).ppt;
            assert_eq!(entangled, f > 0.5 + 1e-9, "F = {f}");
        }
    }
}
