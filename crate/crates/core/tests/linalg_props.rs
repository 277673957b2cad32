use entorder::linalg::{hermitian_eig, kron, partial_trace, partial_transpose, ComplexMatrix, Subsystem};
use entorder::{CMatrix, CMatrix32, C64};
use num_complex::Complex;
use proptest::prelude::*;

fn hermitian(n: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        let a = CMatrix::from_fn(n, n, |i, j| C64::new(v[i * n + j].0, v[i * n + j].1));
        a.hermitian_part()
    })
}

fn density(n: usize) -> impl Strategy<Value = CMatrix> {
    hermitian(n).prop_map(|h| {
        let p = &h * &h.adjoint();
        let tr = p.trace().re.max(1e-12);
        p.scale(1.0 / tr)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigen_reconstructs(a in (1usize..7).prop_flat_map(hermitian)) {
        let n = a.rows();
        let e = hermitian_eig(&a).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&a) < 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let v = &e.vectors;
        prop_assert!((&v.adjoint() * v).max_abs_diff(&CMatrix::identity(n)) < 1e-10);
    }

    #[test]
    fn eigen_reconstructs_4x4(a in hermitian(4)) {
        let e = hermitian_eig(&a).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&a) < 1e-10);
        let tr: f64 = e.values.iter().sum();
        prop_assert!((tr - a.trace().re).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product(a in density(2), b in density(3)) {
        let ab = kron(&a, &b);
        prop_assert!(partial_trace(&ab, (2, 3), Subsystem::A).unwrap().max_abs_diff(&a) < 1e-12);
        prop_assert!(partial_trace(&ab, (2, 3), Subsystem::B).unwrap().max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution(r in density(4)) {
        let once = partial_transpose(&r, (2, 2), Subsystem::B).unwrap();
        let twice = partial_transpose(&once, (2, 2), Subsystem::B).unwrap();
        prop_assert!(twice.max_abs_diff(&r) < 1e-15);
        prop_assert!((once.trace() - r.trace()).norm() < 1e-12);
        // transposing both sides is the full transpose
        let both = partial_transpose(&once, (2, 2), Subsystem::A).unwrap();
        prop_assert!(both.max_abs_diff(&r.transpose()) < 1e-15);
    }
}

#[test]
fn single_precision_kernel() {
    let a: CMatrix32 = ComplexMatrix::from_fn(3, 3, |i, j| {
        if i == j {
            Complex::new(i as f32 + 1.0, 0.0)
        } else {
            Complex::new(0.1, if i < j { 0.05 } else { -0.05 })
        }
    });
    let e = hermitian_eig(&a).unwrap();
    assert!(e.reconstruct().max_abs_diff(&a) < 1e-5);
    let e64 = hermitian_eig(&a.cast::<f64>()).unwrap();
    for (x, y) in e.values.iter().zip(&e64.values) {
        assert!((*x as f64 - y).abs() < 1e-5);
    }
}

#[test]
fn non_hermitian_input_is_rejected() {
    let a = CMatrix::from_fn(2, 2, |i, j| C64::new((i + 2 * j) as f64, 0.0));
    assert!(hermitian_eig(&a).is_err());
}
