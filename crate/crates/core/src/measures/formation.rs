use num_traits::Zero;

use super::{MeasureId, MeasureValue};
use crate::error::Result;
use crate::linalg::{hermitian_eig, von_neumann_entropy, Subsystem};
use crate::states::{binary_entropy, require_two_qubits, DensityMatrix, PureState, ROUNDOFF_TOL};
use crate::{CMatrix, C64};

/// `S(tr_B |ψ><ψ|)`; equal to `S(tr_A |ψ><ψ|)` by the Schmidt decomposition.
pub fn entropy_of_entanglement(psi: &PureState) -> Result<MeasureValue> {
    let (da, db) = psi.dims();
    let keep = if da <= db { Subsystem::A } else { Subsystem::B };
    let s = von_neumann_entropy(&psi.reduced(keep))?;
    Ok(MeasureValue::exact(MeasureId::EntropyOfEntanglement, s))
}

/// `σ_y ⊗ σ_y` in the computational basis.
fn spin_flip() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 3)] = C64::new(-1.0, 0.0);
    m[(1, 2)] = C64::new(1.0, 0.0);
    m[(2, 1)] = C64::new(1.0, 0.0);
    m[(3, 0)] = C64::new(-1.0, 0.0);
    m
}

/// Two-qubit concurrence `max(0, μ1 − μ2 − μ3 − μ4)`.
///
/// The `μ_i` are the square roots of the eigenvalues of `ρ (Y⊗Y) ρ* (Y⊗Y)`.
/// They are computed as the singular values of `τ = ξ^T (Y⊗Y) ξ`, where
/// `ρ = ξ ξ^H` is restricted to the support of `ρ`; singular values come
/// from the spectrum of the Hermitian dilation `[[0, τ], [τ^H, 0]]`, which
/// keeps small `μ_i` accurate to round-off instead of its square root.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho.dims(), "concurrence")?;
    let eig = hermitian_eig(rho.matrix())?;
    let support: Vec<usize> = (0..4).filter(|&i| eig.values[i] > ROUNDOFF_TOL).collect();
    let r = support.len();
    if r == 0 {
        return Ok(0.0);
    }
    // ξ: 4 x r, columns √λ_i v_i
    let xi = CMatrix::from_fn(4, r, |row, c| {
        let i = support[c];
        eig.vectors[(row, i)] * eig.values[i].sqrt()
    });
    let tau = &(&xi.transpose() * &spin_flip()) * &xi;
    let dilation = CMatrix::from_fn(2 * r, 2 * r, |i, j| match (i < r, j < r) {
        (true, false) => tau[(i, j - r)],
        (false, true) => tau[(j, i - r)].conj(),
        _ => C64::zero(),
    });
    let sv = hermitian_eig(&dilation)?.values;
    let mut mu = [0.0f64; 4];
    for (m, &s) in mu.iter_mut().zip(sv.iter().take(r)) {
        *m = s.max(0.0);
    }
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0))
}

/// `h((1 + √(1 − C²)) / 2)`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    let p = 0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt());
    binary_entropy(p.clamp(0.0, 1.0)).expect("p in [0, 1]")
}

/// Entanglement of formation of a two-qubit state in closed form.
pub fn eof_closed_form(rho: &DensityMatrix) -> Result<MeasureValue> {
    let c = concurrence(rho)?;
    Ok(MeasureValue::exact(MeasureId::FormationClosedForm, eof_from_concurrence(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::rng::SeedSpec;
    use crate::states::{haar_pure, is_ppt, pure_with_schmidt, random_separable, werner, BellLabel};

    const EF_WERNER_075: f64 = 0.354_578_902_665_270_03;

    #[test]
    fn entropy_examples() {
        let bell = entropy_of_entanglement(&BellLabel::PhiPlus.state()).unwrap();
        assert!((bell.value - 1.0).abs() < 1e-14);
        let prod = entropy_of_entanglement(&pure_with_schmidt(1.0).unwrap()).unwrap();
        assert!(prod.value.abs() < 1e-14);
        let s = entropy_of_entanglement(&pure_with_schmidt(0.9).unwrap()).unwrap();
        assert!((s.value - 0.468_995_593_589_281_1).abs() < 1e-12);
    }

    #[test]
    fn entropy_symmetric_in_traced_side() {
        let psi = haar_pure((2, 3), SeedSpec::new(4, 4)).unwrap();
        let a = von_neumann_entropy(&psi.reduced(Subsystem::A)).unwrap();
        let b = von_neumann_entropy(&psi.reduced(Subsystem::B)).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn concurrence_examples() {
        let c = concurrence(&BellLabel::PhiPlus.state().density()).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        assert!((concurrence(&werner(0.75).unwrap()).unwrap() - 0.5).abs() < 1e-12);
        for i in 0..20 {
            let rho = random_separable(16, SeedSpec::new(8, i)).unwrap();
            assert!(is_ppt(&rho).ppt);
            assert_eq!(concurrence(&rho).unwrap(), 0.0);
        }
    }

    #[test]
    fn concurrence_rejects_other_dims() {
        let rho = DensityMatrix::maximally_mixed((2, 3)).unwrap();
        assert!(matches!(concurrence(&rho), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn eof_examples() {
        let w = eof_closed_form(&werner(0.75).unwrap()).unwrap();
        assert!((w.value - EF_WERNER_075).abs() < 1e-12);
        assert!(eof_closed_form(&werner(0.25).unwrap()).unwrap().value.abs() < 1e-15);
    }

    #[test]
    fn eof_matches_entropy_on_pure_states() {
        for i in 0..100 {
            let psi = haar_pure((2, 2), SeedSpec::new(21, i)).unwrap();
            let ef = eof_closed_form(&psi.density()).unwrap().value;
            let s = entropy_of_entanglement(&psi).unwrap().value;
            assert!((ef - s).abs() < 1e-10, "{ef} vs {s}");
        }
    }

    #[test]
    fn eof_monotone_in_concurrence() {
        let mut prev = -1.0;
        for k in 0..=200 {
            let e = eof_from_concurrence(k as f64 / 200.0);
            assert!(e >= prev);
            prev = e;
        }
    }
}
