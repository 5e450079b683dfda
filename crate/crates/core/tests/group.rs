use brf::group_brf::{bi_invariant_residual, diagonal_equations, parse_algebra, verify_rigidity, GroupFrame};
use proptest::prelude::*;

fn frame(spec: &str) -> GroupFrame {
    GroupFrame::new(parse_algebra(spec).unwrap(), None).unwrap()
}

fn metric_entries(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-1.5f64..1.5).prop_map(f64::exp), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ricci_formula_matches_summation(x in metric_entries(6)) {
        let gf = frame("su2+su2");
        let m = gf.metric(x).unwrap();
        prop_assert!(m.ricci_group().sub(&m.ricci_bruteforce()).max_abs() < 1e-10);
    }

    #[test]
    fn bismut_ricci_identity(x in metric_entries(8)) {
        let gf = frame("su3");
        let m = gf.metric(x).unwrap();
        let lhs = m.ricci_bruteforce().sub(&m.hb_squared().scale(&0.25));
        let rhs = m.brf_group_equations().scale(&-0.25);
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-10);
    }

    #[test]
    fn diagonal_form_agrees(x in metric_entries(3)) {
        let gf = frame("su2");
        let m = gf.metric(x).unwrap();
        let full = m.brf_group_equations();
        for (k, v) in diagonal_equations(&m).into_iter().enumerate() {
            prop_assert!((v - full.get(k, k)).abs() < 1e-10);
        }
    }
}

#[test]
fn structure_constants_square_to_minus_killing() {
    for spec in ["su2", "su3", "so5", "su2+su3"] {
        let gf = frame(spec);
        let cc = gf.cc_sum();
        let n = gf.dim();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((cc.get(i, j) - want).abs() < 1e-10, "{spec} ({i},{j})");
            }
        }
    }
}

#[test]
fn bi_invariant_metric_with_cartan_form_is_bismut_ricci_flat() {
    for spec in ["su2", "su2+su2", "g2"] {
        let gf = frame(spec);
        let y = vec![1.0; gf.ideals.len()];
        assert!(bi_invariant_residual(&gf, &y) < 1e-10, "{spec}");
        let m = gf.metric(vec![1.0; gf.dim()]).unwrap();
        assert!(m.brf_group_equations().max_abs() < 1e-10);
        assert!(m.cartan_codifferential().max_abs() < 1e-10);
    }
}

#[test]
fn wrong_torsion_scale_is_not_flat() {
    let gf = frame("su2");
    assert!(bi_invariant_residual(&gf, &[0.5]) > 1e-3);
}

#[test]
fn rigidity_on_su2() {
    let r = verify_rigidity(&frame("su2"), 40, 1).unwrap();
    assert_eq!(r.solutions_found, 1);
    assert!(r.solutions[0].iter().all(|v| (v - 1.0).abs() < 1e-8));
    assert!(r.hull_checks.iter().all(|h| h.slack >= -1e-8));
}

#[test]
fn unknown_algebra_is_rejected() {
    assert!(parse_algebra("u1").is_err());
    assert!(parse_algebra("su").is_err());
}
