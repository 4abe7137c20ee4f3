use digital_binomial::algebra::ExactPoly;
use digital_binomial::digits::{carry_free, s2};
use digital_binomial::identities::{
    digital_binomial_sides, verify_additivity_form, verify_classical_reduction, verify_inverse,
    verify_triangle_matrix_correspondence,
};
use digital_binomial::sierpinski::{build_closed_form, build_recursive, matrices_equal, Limits};
use num_bigint::BigInt;
use num_traits::Pow;
use proptest::prelude::*;

fn args() -> Vec<ExactPoly> {
    let (x, y) = (ExactPoly::x(), ExactPoly::y());
    vec![
        x.clone(),
        y.clone(),
        &x + &y,
        ExactPoly::one(),
        ExactPoly::zero(),
    ]
}

#[test]
fn constructions_agree_for_every_argument() {
    let l = Limits::default();
    for arg in args() {
        for n in 0..=10 {
            let rec = build_recursive(n, &arg, &l).unwrap();
            let closed = build_closed_form(n, &arg, &l).unwrap();
            assert_eq!(rec.nnz(), closed.nnz());
            assert!(matrices_equal(&rec, &closed), "n = {n}, arg = {arg}");
        }
    }
}

#[test]
fn order_twelve_builds() {
    let l = Limits::default();
    let rec = build_recursive(12, &ExactPoly::x(), &l).unwrap();
    let closed = build_closed_form(12, &ExactPoly::x(), &l).unwrap();
    assert_eq!(rec.nnz(), 531_441);
    assert_eq!(rec, closed);
}

#[test]
fn s_at_zero_is_identity() {
    for n in 0..=10 {
        let m = build_recursive(n, &ExactPoly::zero(), &Limits::default()).unwrap();
        assert!(m.expand().is_identity(), "n = {n}");
    }
}

#[test]
fn s_at_one_is_the_submask_pattern() {
    let m = build_closed_form(10, &ExactPoly::one(), &Limits::default())
        .unwrap()
        .expand();
    for j in 0..1024usize {
        for k in 0..1024usize {
            let e = m.entry(j, k);
            let submask = k & !j == 0;
            assert_eq!(
                e,
                if submask {
                    ExactPoly::one()
                } else {
                    ExactPoly::zero()
                }
            );
        }
    }
}

#[test]
fn row_counts_and_diagonal() {
    let l = Limits::default();
    for n in 0..=10u32 {
        let m = build_recursive(n, &ExactPoly::x(), &l).unwrap();
        assert_eq!(m.nnz() as u64, 3u64.pow(n));
        for j in 0..m.dim() {
            assert_eq!(m.row(j).len(), 1 << s2(j as u64));
            assert_eq!(m.exponent(j, j), Some(0));
            for &(k, e) in m.row(j) {
                assert!(carry_free(u64::from(k), j as u64 - u64::from(k)));
                assert_eq!(e, s2(j as u64 - u64::from(k)));
            }
        }
    }
}

#[test]
fn inverse_up_to_order_eight() {
    for n in 0..=8 {
        assert!(
            verify_inverse(n, &Limits::default()).unwrap().passed,
            "n = {n}"
        );
    }
}

#[test]
fn additivity_form_exhaustive() {
    for m in 0..4096 {
        let r = verify_additivity_form(m).unwrap();
        assert!(r.passed, "{r}");
    }
}

#[test]
fn classical_reduction_up_to_sixteen() {
    for n in 1..=16 {
        assert!(verify_classical_reduction(n).unwrap().passed, "n = {n}");
    }
}

#[test]
fn correspondence_up_to_eight() {
    for n in 0..=8 {
        assert!(
            verify_triangle_matrix_correspondence(n, &Limits::default())
                .unwrap()
                .passed
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn digital_binomial_sides_evaluate_like_powers(
        m in 0u64..1 << 20,
        x0 in -1000i64..=1000,
        y0 in -1000i64..=1000,
    ) {
        let (lhs, rhs) = digital_binomial_sides(m, &Limits::default()).unwrap();
        let (x0, y0) = (BigInt::from(x0), BigInt::from(y0));
        let direct = Pow::pow(&(&x0 + &y0), s2(m));
        prop_assert_eq!(lhs.eval(&x0, &y0), direct.clone());
        prop_assert_eq!(rhs.eval(&x0, &y0), direct);
    }

    #[test]
    fn digital_binomial_for_sparse_wide_m(bits in prop::collection::btree_set(0u32..40, 0..=16)) {
        let m = bits.iter().fold(0u64, |m, b| m | 1 << b);
        let (lhs, rhs) = digital_binomial_sides(m, &Limits::default()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
