use entorder::linalg::Subsystem;
use entorder::measures::eof_closed_form;
use entorder::rng::SeedSpec;
use entorder::states::{
    bell_diagonal, binary_entropy, ginibre_mixed, haar_pure, invert_binary_entropy, is_ppt, random_separable, werner,
    DensityMatrix, FamilySpec, State, StateFile,
};
use entorder::{CMatrix, C64};
use proptest::prelude::*;

fn purity(m: &CMatrix) -> f64 {
    m.trace_product(m).re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ginibre_is_valid_and_rank_k(seed in any::<u64>(), k in 1usize..=4) {
        let rho = ginibre_mixed((2, 2), k, SeedSpec::new(seed, 0)).unwrap();
        let spec = rho.spectrum();
        prop_assert!((spec.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(spec.iter().all(|&l| l >= -1e-12));
        prop_assert!(spec.iter().filter(|&&l| l > 1e-10).count() <= k);
        if k == 1 {
            prop_assert!((rho.purity() - 1.0).abs() < 1e-10);
        }
        // revalidation is a no-op
        let again = DensityMatrix::validate(rho.matrix().clone(), (2, 2)).unwrap();
        prop_assert!(again.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn haar_states_are_normalized_and_reproducible(seed in any::<u64>(), stream in 0u64..1000) {
        let s = SeedSpec::new(seed, stream);
        let a = haar_pure((2, 3), s).unwrap();
        prop_assert!((a.norm() - 1.0).abs() < 1e-12);
        prop_assert_eq!(&a, &haar_pure((2, 3), s).unwrap());
        // both marginals of a pure state share their spectrum
        let rho = a.density();
        prop_assert!((purity(&rho.reduced(Subsystem::A)) - purity(&rho.reduced(Subsystem::B))).abs() < 1e-12);
    }

    #[test]
    fn separable_samples_are_ppt_with_zero_formation(seed in any::<u64>(), terms in 1usize..=16) {
        let rho = random_separable(terms, SeedSpec::new(seed, 3)).unwrap();
        prop_assert!(is_ppt(&rho).ppt);
        prop_assert!(eof_closed_form(&rho).unwrap().value <= 1e-10);
    }

    #[test]
    fn binary_entropy_inverts(p in 0.0f64..=0.5) {
        let e = binary_entropy(p).unwrap();
        let q = invert_binary_entropy(e).unwrap();
        prop_assert!((binary_entropy(q).unwrap() - e).abs() < 1e-12);
        prop_assert!((q - p).abs() < 1e-6 || e > 1.0 - 1e-9);
    }

    #[test]
    fn bell_diagonal_spectrum_is_its_weights(w in proptest::collection::vec(0.0f64..1.0, 4)) {
        let total: f64 = w.iter().sum();
        prop_assume!(total > 1e-3);
        let mut weights = [w[0] / total, w[1] / total, w[2] / total, w[3] / total];
        weights[3] = 1.0 - weights[0] - weights[1] - weights[2];
        prop_assume!(weights[3] >= 0.0);
        let rho = bell_diagonal(weights).unwrap();
        let mut sorted = weights;
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (x, y) in rho.spectrum().iter().zip(&sorted) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn state_files_round_trip(seed in any::<u64>()) {
        for state in [
            State::Mixed(ginibre_mixed((2, 2), 3, SeedSpec::new(seed, 1)).unwrap()),
            State::Pure(haar_pure((2, 2), SeedSpec::new(seed, 2)).unwrap()),
        ] {
            let text = serde_json::to_string(&StateFile::from_state(&state)).unwrap();
            let back = StateFile::from_json(&text).unwrap().into_state().unwrap();
            prop_assert!(back.density().matrix().max_abs_diff(state.density().matrix()) < 1e-15);
            prop_assert_eq!(back.is_pure(), state.is_pure());
        }
    }

    #[test]
    fn seeded_specs_print_and_parse_back(seed in any::<u64>(), stream in 0u64..100, k in 1usize..=4) {
        for text in [format!("ginibre:k={k}"), "haar".to_string(), format!("separable:K={}", 4 * k)] {
            let spec: FamilySpec = text.parse().unwrap();
            let seeded = spec.seeded(seed, stream);
            let reparsed: FamilySpec = seeded.to_string().parse().unwrap();
            prop_assert_eq!(&reparsed, &seeded);
            prop_assert_eq!(reparsed.build().unwrap(), seeded.build().unwrap());
        }
    }
}

#[test]
fn werner_matches_bell_diagonal() {
    for f in [0.25, 0.5, 0.75, 0.9, 1.0] {
        let r = (1.0 - f) / 3.0;
        let a = werner(f).unwrap();
        let b = bell_diagonal([f, r, r, r]).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12, "F = {f}");
    }
    let mixed = werner(0.25).unwrap();
    assert!(mixed.matrix().max_abs_diff(&CMatrix::identity(4).scale(0.25)) < 1e-15);
}

#[test]
fn invalid_matrices_name_the_broken_invariant() {
    use entorder::Error;
    let diag = |d: [f64; 4]| CMatrix::from_fn(4, 4, |i, j| if i == j { C64::new(d[i], 0.0) } else { C64::new(0.0, 0.0) });
    assert!(matches!(DensityMatrix::validate(diag([0.5; 4]), (2, 2)), Err(Error::NotUnitTrace { .. })));
    assert!(matches!(DensityMatrix::validate(diag([1.5, -0.5, 0.0, 0.0]), (2, 2)), Err(Error::NotPositive { .. })));
    let mut m = diag([0.25; 4]);
    m.as_mut_slice()[1] = C64::new(0.1, 0.0);
    assert!(matches!(DensityMatrix::validate(m, (2, 2)), Err(Error::NotHermitian { .. })));
    assert!(matches!(DensityMatrix::validate(diag([0.25; 4]), (3, 2)), Err(Error::DimensionMismatch(_))));
    assert!(matches!(werner(1.5), Err(Error::Domain(_))));
}

#[test]
fn corrupted_state_files_are_parse_errors() {
    assert!(matches!(StateFile::from_json("{\"dims\": [2, 2], \"matrix\":"), Err(entorder::Error::Parse(_))));
    let short = r#"{"dims":[2,2],"amp_re":[1,0,0],"amp_im":[0,0,0]}"#;
    assert!(StateFile::from_json(short).unwrap().into_state().is_err());
}
