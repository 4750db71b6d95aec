use chiralcav::numerics::{
    hermitian_trace_norm, kron, mat_exp, singular_values, trace_norm, ComplexMatrix, C64,
};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, scale: f64) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-scale..scale, -scale..scale), rows * cols).prop_map(move |v| {
        ComplexMatrix::from_vec(rows, cols, v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap()
    })
}

fn square(max: usize, scale: f64) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max).prop_flat_map(move |n| matrix(n, n, scale))
}

fn hermitian(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    square(max, 1.0).prop_map(|m| (&m + &m.adjoint()).scale_real(0.5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_mixed_product(
        (a, c) in (1..4usize, 1..4usize).prop_flat_map(|(n, m)| (matrix(n, m, 1.0), matrix(m, 2, 1.0))),
        (b, d) in (1..4usize, 1..4usize).prop_flat_map(|(n, m)| (matrix(n, m, 1.0), matrix(m, 3, 1.0))),
    ) {
        let lhs = kron(&a, &b).matmul(&kron(&c, &d)).unwrap();
        let rhs = kron(&a.matmul(&c).unwrap(), &b.matmul(&d).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn exp_semigroup(a in square(6, 1.0), s in -2.0..2.0f64, t in -2.0..2.0f64) {
        let lhs = mat_exp(&a.scale_real(s + t)).unwrap();
        let rhs = mat_exp(&a.scale_real(s)).unwrap().matmul(&mat_exp(&a.scale_real(t)).unwrap()).unwrap();
        let rel = lhs.max_abs_diff(&rhs) / lhs.max_abs().max(1.0);
        prop_assert!(rel < 1e-9, "relative residual {rel:e}");
    }

    #[test]
    fn exp_of_anti_hermitian_is_unitary(h in hermitian(8), t in -30.0..30.0f64) {
        let u = mat_exp(&h.scale(C64::new(0.0, -t))).unwrap();
        let n = u.rows();
        prop_assert!(u.adjoint().matmul(&u).unwrap().max_abs_diff(&ComplexMatrix::identity(n)) < 1e-9);
    }

    #[test]
    fn trace_norm_bounds_trace(a in square(6, 2.0)) {
        prop_assert!(trace_norm(&a).unwrap() + 1e-12 >= a.trace().unwrap().norm());
    }

    #[test]
    fn trace_norm_equals_trace_for_psd(a in square(6, 1.0)) {
        let p = a.matmul(&a.adjoint()).unwrap();
        let tr = p.trace().unwrap().re;
        prop_assert!((trace_norm(&p).unwrap() - tr).abs() < 1e-10 * tr.max(1.0));
    }

    #[test]
    fn singular_values_adjoint_invariant(a in (1..6usize, 1..6usize).prop_flat_map(|(r, c)| matrix(r, c, 1.0))) {
        let s = singular_values(&a);
        let t = singular_values(&a.adjoint());
        prop_assert_eq!(s.len(), t.len());
        for (x, y) in s.iter().zip(&t) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let frob2: f64 = s.iter().map(|x| x * x).sum();
        prop_assert!((frob2 - a.frobenius_norm().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn hermitian_trace_norm_matches_svd(h in hermitian(8)) {
        prop_assert!((hermitian_trace_norm(&h).unwrap() - trace_norm(&h).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn exp_handles_large_norms() {
    let d = ComplexMatrix::from_real_diag(&[-40.0, 3.0, 12.5]);
    let e = mat_exp(&d).unwrap();
    for (i, x) in [-40.0f64, 3.0, 12.5].iter().enumerate() {
        assert!((e[(i, i)].re - x.exp()).abs() / x.exp() < 1e-13);
    }
}
